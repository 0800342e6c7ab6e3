"""Gibbs state rho(T) = exp(-H/T) / Z with k_B = 1."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveTemperature
from .linalg import hermitian_eigen


@dataclass(frozen=True)
class ThermalState:
    """A density matrix at temperature T.

    ``partition_function`` is Σ exp(-β(λ - λ_min)), i.e. Z measured from the
    ground energy ``energy_shift``. The unshifted value is
    ``partition_function * exp(-β * energy_shift)``, which may overflow.
    """

    rho: np.ndarray
    temperature: float
    beta: float
    partition_function: float
    energy_shift: float

    @property
    def log_partition_function(self) -> float:
        """ln Z in the unshifted convention."""
        return math.log(self.partition_function) - self.beta * self.energy_shift


def gibbs_state(h, temperature: float) -> ThermalState:
    if not temperature > 0 or not math.isfinite(temperature):
        raise NonPositiveTemperature(f"temperature must be positive and finite, got {temperature!r}")
    spec = hermitian_eigen(h)
    beta = 1.0 / temperature
    ground = float(spec.values[0])
    weights = np.exp(-beta * (spec.values - ground))
    z = float(weights.sum())
    rho = (spec.vectors * (weights / z)) @ spec.vectors.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return ThermalState(rho=rho, temperature=float(temperature), beta=beta,
                        partition_function=z, energy_shift=ground)
