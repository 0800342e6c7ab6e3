"""Thermal entanglement of two anisotropic spin-1 sites."""

from .analysis import (
    Axis,
    PointRecord,
    Region,
    SweepResult,
    SweepSpec,
    classify_region,
    count_peaks,
    evaluate_point,
    peak_report,
    run_sweep,
    threshold_temperature,
)
from .criteria import (
    NegativityResult,
    RealignmentResult,
    negativity,
    partial_transpose_first,
    realign,
    realignment_criterion,
    unrealign,
)
from .errors import (
    BadDimension,
    CaseMismatch,
    InvalidDensityMatrix,
    NonPositiveTemperature,
    NotBracketed,
    NotHermitian,
    QutritError,
    SweepPointError,
)
from .linalg import Spectrum, hermitian_eigen, singular_values, tensor_product
from .spin import (
    AnalyticSpectrum,
    HamiltonianParams,
    analytic_spectrum_case1,
    analytic_spectrum_case2,
    build_hamiltonian,
    compare_spectrum,
    spin1_operators,
)
from .thermal import ThermalState, gibbs_state

__version__ = "0.1.0"
