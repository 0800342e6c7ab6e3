"""
Two spin-1 sites with anisotropic bilinear-biquadratic exchange in a field:

    A = Sx⊗Sx + Sy⊗Sy + Δ Sz⊗Sz
    H = J A + K A² + B (Sz⊗1 + 1⊗Sz)

Basis ordering of the 9-dim space is ``index = 3*a + b`` with the local
state index 0, 1, 2 standing for m = +1, 0, -1, so |1,1> is index 0 and
|-1,-1> is index 8.

Besides the numeric Hamiltonian this module carries closed-form eigenpairs
for K = 0 and K != 0. These are cross-checks only: every analytic eigenpair
is returned with its residual against the numeric matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CaseMismatch
from .linalg import hermitian_eigen, tensor_product

SQRT2 = math.sqrt(2.0)
DEGENERATE_COUPLING_TOL = 1e-12
RESIDUAL_FLAG_TOL = 1e-8

PARAM_NAMES = ("J", "K", "Delta", "B")


@dataclass(frozen=True)
class HamiltonianParams:
    J: float = 0.0
    K: float = 0.0
    Delta: float = 0.0
    B: float = 0.0

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))

    def replace(self, **changes) -> "HamiltonianParams":
        values = {name: getattr(self, name) for name in PARAM_NAMES}
        values.update(changes)
        return HamiltonianParams(**values)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAM_NAMES}


@dataclass(frozen=True)
class SpinOperators:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


def spin1_operators() -> SpinOperators:
    """Standard spin-1 matrices in the (m=+1, 0, -1) basis.

    Sz carries no 1/√2 prefactor; with it the field term would not give
    H|1,1> = (JΔ + 2B)|1,1>.
    """
    s = 1.0 / SQRT2
    sx = s * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.complex128)
    sy = s * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=np.complex128)
    sz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
    return SpinOperators(sx=sx, sy=sy, sz=sz)


def exchange_operator(delta: float) -> np.ndarray:
    ops = spin1_operators()
    return (
        tensor_product(ops.sx, ops.sx)
        + tensor_product(ops.sy, ops.sy)
        + delta * tensor_product(ops.sz, ops.sz)
    )


def total_sz() -> np.ndarray:
    sz = spin1_operators().sz
    eye = np.eye(3, dtype=np.complex128)
    return tensor_product(sz, eye) + tensor_product(eye, sz)


def build_hamiltonian(p: HamiltonianParams) -> np.ndarray:
    a = exchange_operator(p.Delta)
    h = p.J * a + p.K * (a @ a) + p.B * total_sz()
    # exact Hermitian symmetrization; only removes roundoff from a @ a
    return 0.5 * (h + h.conj().T)


def basis_state(m1: int, m2: int) -> np.ndarray:
    """Product state |m1, m2> with m in {1, 0, -1}."""
    index = 3 * (1 - m1) + (1 - m2)
    v = np.zeros(9, dtype=np.complex128)
    v[index] = 1.0
    return v


# ---------------------------------------------------------------------------
# closed-form spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Eigenpair:
    label: str
    value: float
    vector: np.ndarray
    residual: float  # ||H v - value v|| against the numeric Hamiltonian


@dataclass(frozen=True)
class AnalyticSpectrum:
    case: int
    params: HamiltonianParams
    entries: tuple[Eigenpair, ...]
    derived: dict[str, float] = field(default_factory=dict)
    degenerate_coupling: bool = False

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries])

    def by_label(self, label: str) -> Eigenpair:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    @property
    def max_residual(self) -> float:
        return max(e.residual for e in self.entries)


def _normalized(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _central(c_up_down: float, c_zero: float, c_down_up: float) -> np.ndarray:
    # amplitudes on |1,-1>, |0,0>, |-1,1>
    return c_up_down * basis_state(1, -1) + c_zero * basis_state(0, 0) + c_down_up * basis_state(-1, 1)


def _shared_vectors() -> dict[str, np.ndarray]:
    return {
        "|1,1>": basis_state(1, 1),
        "|-1,-1>": basis_state(-1, -1),
        "Psi1+": (basis_state(1, 0) + basis_state(0, 1)) / SQRT2,
        "Psi1-": (basis_state(1, 0) - basis_state(0, 1)) / SQRT2,
        "Psi2+": (basis_state(0, -1) + basis_state(-1, 0)) / SQRT2,
        "Psi2-": (basis_state(0, -1) - basis_state(-1, 0)) / SQRT2,
        "Phi": _central(1.0, 0.0, -1.0) / SQRT2,
    }


def _assemble(case, p, values, vectors, derived, degenerate=False) -> AnalyticSpectrum:
    h = build_hamiltonian(p)
    entries = []
    for label, value in values.items():
        v = vectors[label]
        residual = float(np.linalg.norm(h @ v - value * v))
        entries.append(Eigenpair(label=label, value=float(value), vector=v, residual=residual))
    return AnalyticSpectrum(
        case=case, params=p, entries=tuple(entries), derived=derived, degenerate_coupling=degenerate
    )


def analytic_spectrum_case1(p: HamiltonianParams) -> AnalyticSpectrum:
    """Closed-form eigenpairs for K = 0.

    The |Phi±> states are returned with unit norm, i.e. with the prefactor
    [8 + η±²]^(-1/2).
    """
    if p.K != 0.0:
        raise CaseMismatch(f"closed-form K=0 spectrum requested with K={p.K}")
    J, D, B = p.J, p.Delta, p.B
    root = math.sqrt(D * D + 8.0)
    xi_p = 0.5 * (-J * D + J * root)
    xi_m = 0.5 * (-J * D - J * root)
    eta_p = D + root
    eta_m = D - root

    vectors = _shared_vectors()
    vectors["Phi+"] = _normalized(_central(2.0, eta_p, 2.0))
    vectors["Phi-"] = _normalized(_central(2.0, eta_m, 2.0))
    values = {
        "|1,1>": J * D + 2 * B,
        "|-1,-1>": J * D - 2 * B,
        "Psi1+": B + J,
        "Psi1-": B - J,
        "Psi2+": -B + J,
        "Psi2-": -B - J,
        "Phi+": xi_p,
        "Phi-": xi_m,
        "Phi": -J * D,
    }
    derived = {"xi+": xi_p, "xi-": xi_m, "eta+": eta_p, "eta-": eta_m}
    return _assemble(1, p, values, vectors, derived)


def _symmetric_central_block(p: HamiltonianParams):
    """Numeric eigenpairs of H on span{(|1,-1>+|-1,1>)/√2, |0,0>}, ascending."""
    basis = np.stack([_central(1.0, 0.0, 1.0) / SQRT2, basis_state(0, 0)], axis=1)
    h = build_hamiltonian(p)
    spec = hermitian_eigen(basis.conj().T @ h @ basis)
    return spec.values, basis @ spec.vectors


def analytic_spectrum_case2(p: HamiltonianParams) -> AnalyticSpectrum:
    """Closed-form eigenpairs for general K, as printed for the K != 0 case.

    The pair in the central S_z = 0 sector (eigenvalues ζ±/2) is reported,
    not trusted: away from K = 0 the closed form does not always match the
    matrix, and the per-entry residual shows it. When J - KΔ vanishes the
    printed amplitude divides by zero; the pair's vectors are then taken
    from the numeric symmetric sector and ``degenerate_coupling`` is set.
    """
    J, K, D, B = p.J, p.K, p.Delta, p.B
    alpha = -J * D + K * D * D + K
    coupling = J - K * D
    root = math.sqrt((alpha + K) ** 2 + 8.0 * coupling**2)
    zeta_p = alpha + K + root
    zeta_m = alpha + K - root

    vectors = _shared_vectors()
    degenerate = abs(coupling) < DEGENERATE_COUPLING_TOL
    if degenerate:
        _, numeric = _symmetric_central_block(p)
        vectors["Phi-"] = numeric[:, 0]
        vectors["Phi+"] = numeric[:, 1]
    else:
        # |Phi±> uses ζ∓ in its |0,0> amplitude
        vectors["Phi+"] = _normalized(_central(2.0, -zeta_m / coupling, 2.0))
        vectors["Phi-"] = _normalized(_central(2.0, -zeta_p / coupling, 2.0))
    kd2 = K * D * D
    values = {
        "|1,1>": J * D + 2 * B + kd2,
        "|-1,-1>": J * D - 2 * B + kd2,
        "Psi1+": B + J + K,
        "Psi1-": B - J + K,
        "Psi2+": -B + J + K,
        "Psi2-": -B - J + K,
        "Phi+": zeta_p / 2,
        "Phi-": zeta_m / 2,
        "Phi": -J * D + kd2,
    }
    derived = {"alpha": alpha, "zeta+": zeta_p, "zeta-": zeta_m}
    return _assemble(2, p, values, vectors, derived, degenerate)


def analytic_spectrum(p: HamiltonianParams, case: int | None = None) -> AnalyticSpectrum:
    if case is None:
        case = 1 if p.K == 0.0 else 2
    if case == 1:
        return analytic_spectrum_case1(p)
    if case == 2:
        return analytic_spectrum_case2(p)
    raise ValueError(f"case must be 1 or 2, got {case!r}")


@dataclass(frozen=True)
class SpectrumRow:
    label: str
    analytic: float
    nearest_numeric: float
    rayleigh: float  # <v|H|v> for the analytic vector
    residual: float
    flagged: bool


def compare_spectrum(p: HamiltonianParams, case: int | None = None,
                     flag_tol: float = RESIDUAL_FLAG_TOL) -> list[SpectrumRow]:
    """Pair each analytic eigenpair with the numeric spectrum of H."""
    analytic = analytic_spectrum(p, case)
    h = build_hamiltonian(p)
    numeric = hermitian_eigen(h).values
    rows = []
    for e in analytic.entries:
        nearest = float(numeric[np.argmin(np.abs(numeric - e.value))])
        rayleigh = float(np.real(np.vdot(e.vector, h @ e.vector)))
        rows.append(SpectrumRow(
            label=e.label,
            analytic=e.value,
            nearest_numeric=nearest,
            rayleigh=rayleigh,
            residual=e.residual,
            flagged=e.residual > flag_tol,
        ))
    return rows
