"""
Parameter sweeps and derived quantities over the thermal two-qutrit model.

Every grid point is a pure function of the sweep description, so points
can be evaluated in worker processes; results are always returned in
row-major order (axis1 outer) no matter how they were scheduled.
"""

from __future__ import annotations

import datetime as _dt
import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .criteria import ZERO_THRESHOLD, negativity, realignment_criterion
from .errors import NotBracketed, QutritError, SweepPointError
from .spin import PARAM_NAMES, HamiltonianParams, build_hamiltonian
from .thermal import gibbs_state

AXIS_NAMES = PARAM_NAMES + ("T",)
DETECTORS = ("negativity", "realignment")
DETECTION_THRESHOLD = 1e-9


@dataclass(frozen=True)
class PointRecord:
    J: float
    K: float
    Delta: float
    B: float
    T: float
    negativity: float | None
    trace_norm: float | None
    R: float | None
    pt_min_eig: float | None

    @property
    def entangled_by_N(self) -> bool | None:
        return None if self.negativity is None else self.negativity > ZERO_THRESHOLD

    @property
    def entangled_by_R(self) -> bool | None:
        return None if self.R is None else self.R > ZERO_THRESHOLD


def evaluate_point(p: HamiltonianParams, T: float, log_base: float = math.e,
                   detectors=DETECTORS) -> PointRecord:
    state = gibbs_state(build_hamiltonian(p), T)
    n = tn = r = pt_min = None
    if "negativity" in detectors:
        neg = negativity(state.rho)
        n, pt_min = neg.negativity, neg.pt_min_eigenvalue
    if "realignment" in detectors:
        real = realignment_criterion(state.rho, log_base=log_base)
        tn, r = real.trace_norm, real.r_value
    return PointRecord(J=p.J, K=p.K, Delta=p.Delta, B=p.B, T=float(T),
                       negativity=n, trace_norm=tn, R=r, pt_min_eig=pt_min)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"axis name must be one of {AXIS_NAMES}, got {self.name!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise ValueError(f"axis {self.name}: need finite min < max, got {self.start}, {self.stop}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"axis {self.name}: step count must be an integer >= 2, got {self.steps}")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``name:min:max:steps``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"axis must look like name:min:max:steps, got {text!r}")
        name, lo, hi, steps = parts
        return cls(name, float(lo), float(hi), int(steps))

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.steps - 1)

    def __str__(self):
        return f"{self.name}:{self.start!r}:{self.stop!r}:{self.steps}"


@dataclass(frozen=True)
class SweepSpec:
    """A grid over one or two of J, K, Delta, B, T around fixed values."""

    params: HamiltonianParams
    temperature: float
    axis1: Axis
    axis2: Axis | None = None
    detectors: tuple[str, ...] = DETECTORS
    log_base: float = math.e

    def __post_init__(self):
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ValueError(f"swept parameters must be distinct, got {self.axis1.name} twice")
        unknown = set(self.detectors) - set(DETECTORS)
        if unknown or not self.detectors:
            raise ValueError(f"detectors must be a nonempty subset of {DETECTORS}")
        object.__setattr__(self, "detectors", tuple(d for d in DETECTORS if d in self.detectors))
        if not self.log_base > 1:
            raise ValueError(f"log base must exceed 1, got {self.log_base}")

    @property
    def axes(self) -> tuple[Axis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.steps for a in self.axes)

    def point(self, index: tuple[int, ...]) -> tuple[HamiltonianParams, float]:
        values = self.params.as_dict()
        values["T"] = self.temperature
        for axis, i in zip(self.axes, index):
            values[axis.name] = float(axis.values[i])
        T = values.pop("T")
        return HamiltonianParams(**values), T


@dataclass
class SweepResult:
    spec: SweepSpec
    records: list[PointRecord]
    thresholds: dict[str, float] = field(default_factory=lambda: {
        "zero": ZERO_THRESHOLD, "detection": DETECTION_THRESHOLD})
    timestamp: str = ""

    @property
    def shape(self) -> tuple[int, ...]:
        return self.spec.shape

    def grid(self, field_name: str) -> np.ndarray:
        """Values of one record field reshaped onto the sweep grid."""
        vals = [getattr(r, field_name) for r in self.records]
        return np.array([np.nan if v is None else v for v in vals], dtype=float).reshape(self.shape)


def _evaluate_row(spec: SweepSpec, i: int) -> list[PointRecord]:
    inner = [()] if spec.axis2 is None else [(j,) for j in range(spec.axis2.steps)]
    row = []
    for rest in inner:
        index = (i,) + rest
        p, T = spec.point(index)
        try:
            row.append(evaluate_point(p, T, spec.log_base, spec.detectors))
        except (QutritError, ArithmeticError, np.linalg.LinAlgError) as exc:
            coords = p.as_dict()
            coords["T"] = T
            raise SweepPointError(index, coords, exc) from exc
    return row


def run_sweep(spec: SweepSpec, parallelism: int = 1) -> SweepResult:
    """Evaluate every grid point; ``parallelism`` > 1 uses worker processes."""
    rows = range(spec.axis1.steps)
    if parallelism <= 1:
        chunks = [_evaluate_row(spec, i) for i in rows]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            chunks = list(pool.map(_evaluate_row, [spec] * len(rows), rows))
    records = [r for chunk in chunks for r in chunk]
    stamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return SweepResult(spec=spec, records=records, timestamp=stamp)


# ---------------------------------------------------------------------------
# threshold temperature
# ---------------------------------------------------------------------------


def detector_value(p: HamiltonianParams, T: float, detector: str, log_base: float = math.e) -> float:
    """N for ``negativity``, R for ``realignment``."""
    if detector not in DETECTORS:
        raise ValueError(f"detector must be one of {DETECTORS}, got {detector!r}")
    rec = evaluate_point(p, T, log_base, (detector,))
    return rec.negativity if detector == "negativity" else rec.R


@dataclass(frozen=True)
class ThresholdResult:
    detector: str
    t_c: float
    t_lo: float
    t_hi: float
    tolerance: float
    evaluations: int


def threshold_temperature(p: HamiltonianParams, detector: str, t_lo: float, t_hi: float,
                          tol: float = 1e-4, log_base: float = math.e,
                          threshold: float = DETECTION_THRESHOLD) -> ThresholdResult:
    """Bisect for the temperature where ``detector(T) > threshold`` switches off.

    The bracket is checked, not assumed: the predicate must hold at ``t_lo``
    and fail at ``t_hi``. Bisection stops once the bracket is narrower than
    ``tol`` and returns its midpoint.
    """
    if not 0 < t_lo < t_hi:
        raise ValueError(f"need 0 < t_lo < t_hi, got {t_lo}, {t_hi}")
    v_lo = detector_value(p, t_lo, detector, log_base)
    v_hi = detector_value(p, t_hi, detector, log_base)
    if not (v_lo > threshold and not v_hi > threshold):
        raise NotBracketed(
            f"{detector} does not cross {threshold:g} between T={t_lo} ({v_lo:.6g}) and T={t_hi} ({v_hi:.6g})",
            t_lo, t_hi, v_lo, v_hi)
    lo, hi = t_lo, t_hi
    n_eval = 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        n_eval += 1
        if detector_value(p, mid, detector, log_base) > threshold:
            lo = mid
        else:
            hi = mid
    return ThresholdResult(detector=detector, t_c=0.5 * (lo + hi), t_lo=lo, t_hi=hi,
                           tolerance=tol, evaluations=n_eval)


@dataclass(frozen=True)
class GridThresholdReport:
    t_c_max: float | None
    argmax: dict[str, float] | None
    t_c_reference: float
    disagreement: float | None
    flagged: bool


def max_threshold_over_grid(p: HamiltonianParams, detector: str, axis1: Axis, axis2: Axis,
                            t_lo: float, t_hi: float, reference: float,
                            tol: float = 1e-4, log_base: float = math.e,
                            flag_tol: float = 0.02) -> GridThresholdReport:
    """Largest threshold temperature over a parameter grid.

    Points that are not bracketed by [t_lo, t_hi] are skipped. The result is
    flagged when it differs from ``reference`` by more than ``flag_tol``.
    """
    best, where = None, None
    for a in axis1.values:
        for b in axis2.values:
            q = p.replace(**{axis1.name: float(a), axis2.name: float(b)})
            try:
                t = threshold_temperature(q, detector, t_lo, t_hi, tol, log_base).t_c
            except NotBracketed:
                continue
            if best is None or t > best:
                best, where = t, {axis1.name: float(a), axis2.name: float(b)}
    diff = None if best is None else abs(best - reference)
    return GridThresholdReport(t_c_max=best, argmax=where, t_c_reference=reference,
                               disagreement=diff, flagged=diff is not None and diff > flag_tol)


# ---------------------------------------------------------------------------
# sign regions
# ---------------------------------------------------------------------------


class Region(enum.Enum):
    ALL_SAME = 1        # sgn J = sgn K = sgn Δ
    K_WITH_J = 2        # sgn K = sgn J ≠ sgn Δ
    K_WITH_DELTA = 3    # sgn K = sgn Δ ≠ sgn J
    DELTA_WITH_J = 4    # sgn Δ = sgn J ≠ sgn K
    BOUNDARY = "boundary"


def classify_region(p: HamiltonianParams) -> Region:
    if p.J == 0 or p.K == 0 or p.Delta == 0:
        return Region.BOUNDARY
    j, k, d = (math.copysign(1, v) for v in (p.J, p.K, p.Delta))
    if j == k == d:
        return Region.ALL_SAME
    if k == j:
        return Region.K_WITH_J
    if k == d:
        return Region.K_WITH_DELTA
    return Region.DELTA_WITH_J


# ---------------------------------------------------------------------------
# peaks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Peak:
    value: float
    index: tuple[int, ...]
    point: dict[str, float]


@dataclass(frozen=True)
class PeakReport:
    negativity: Peak | None
    realignment: Peak | None
    resolution: dict[str, float]


def _grid_peak(result: SweepResult, field_name: str) -> Peak | None:
    values = result.grid(field_name)
    if np.all(np.isnan(values)):
        return None
    # np.argmax returns the first maximum, i.e. ties go to the lowest index
    flat = int(np.argmax(np.where(np.isnan(values), -np.inf, values)))
    index = tuple(int(i) for i in np.unravel_index(flat, values.shape))
    rec = result.records[flat]
    point = {name: getattr(rec, name) for name in AXIS_NAMES}
    return Peak(value=float(values[index]), index=index, point=point)


def peak_report(result: SweepResult) -> PeakReport:
    if not result.records:
        raise ValueError("empty sweep result")
    return PeakReport(
        negativity=_grid_peak(result, "negativity"),
        realignment=_grid_peak(result, "R"),
        resolution={a.name: a.step for a in result.spec.axes},
    )


def count_peaks(values, floor: float = 1e-3, window: int = 3, prominence: float = 1e-6) -> int:
    """Count local maxima above ``floor`` after a moving average over ``window`` cells.

    Flat tops count once. ``prominence`` suppresses roundoff ripples on
    plateaus.
    """
    x = np.asarray(values, dtype=float)
    if window > 1:
        pad = window // 2
        padded = np.pad(x, pad, mode="edge")
        x = np.convolve(padded, np.ones(window) / window, mode="valid")
    # low sentinels so maxima touching the grid edge are found
    sentinel = x.min() - 1.0
    peaks, _ = find_peaks(np.concatenate([[sentinel], x, [sentinel]]), height=floor, prominence=prominence)
    return len(peaks)
