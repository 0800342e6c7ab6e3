"""
Entanglement detectors for bipartite density matrices: negativity from the
partial transpose, and the realignment (computable cross norm) criterion.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, InvalidDensityMatrix
from .linalg import as_matrix, eigvalsh, hermiticity_error, singular_values

log = logging.getLogger(__name__)

ZERO_THRESHOLD = 1e-12
DENSITY_TOL = 1e-10


def _split(size: int, dims: tuple[int, int] | None) -> tuple[int, int]:
    if dims is None:
        d = math.isqrt(size)
        if d * d != size:
            raise BadDimension(f"size {size} is not a perfect square; pass dims explicitly")
        return d, d
    d1, d2 = dims
    if d1 < 1 or d2 < 1 or d1 * d2 != size:
        raise BadDimension(f"dims {dims} do not match matrix size {size}")
    return d1, d2


def _square(rho) -> np.ndarray:
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise BadDimension(f"expected a square matrix, got shape {m.shape}")
    return m


def partial_transpose_first(rho, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Transpose the first subsystem: result[(i,k),(j,l)] = rho[(j,k),(i,l)].

    For the d1 x d1 grid of d2 x d2 blocks this swaps block (i, j) with
    block (j, i) and leaves each block's entries untouched.
    """
    m = _square(rho)
    d1, d2 = _split(m.shape[0], dims)
    return m.reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3).reshape(d1 * d2, d1 * d2)


def realign(rho, block_size: int) -> np.ndarray:
    """Rearrange an (m n) x (m n) matrix of n x n blocks into an m² x n² matrix.

    Row ``j*m + i`` is vec(rho_{i,j})ᵀ, so block columns are traversed
    outermost; vec stacks the columns of a block, putting entry (k, l) of the
    block at position ``l*n + k``.
    """
    a = _square(rho)
    size = a.shape[0]
    if block_size < 1 or size % block_size:
        raise BadDimension(f"block size {block_size} does not divide matrix size {size}")
    n = block_size
    m = size // n
    # a[i*n + k, j*n + l] -> out[j*m + i, l*n + k]
    return a.reshape(m, n, m, n).transpose(2, 0, 3, 1).reshape(m * m, n * n)


def unrealign(realigned, blocks: int, block_size: int) -> np.ndarray:
    """Inverse of :func:`realign` for ``blocks`` x ``blocks`` blocks."""
    r = as_matrix(realigned)
    m, n = blocks, block_size
    if r.shape != (m * m, n * n):
        raise BadDimension(f"expected shape {(m * m, n * n)}, got {r.shape}")
    return r.reshape(m, m, n, n).transpose(1, 3, 0, 2).reshape(m * n, m * n)


def validate_density_matrix(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity, returning a cleaned copy.

    Small negative eigenvalues (down to ``-tol``) are clipped to zero and
    the result renormalized.
    """
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise InvalidDensityMatrix("shape", f"density matrix must be square, got {m.shape}")
    herr = hermiticity_error(m)
    if herr > tol:
        raise InvalidDensityMatrix("hermitian", f"not Hermitian (max deviation {herr:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        raise InvalidDensityMatrix("trace", f"trace is {tr.real:.12g}, expected 1")
    m = 0.5 * (m + m.conj().T)
    values, vectors = np.linalg.eigh(m)
    lowest = float(values[0])
    if lowest < -tol:
        raise InvalidDensityMatrix("positive", f"smallest eigenvalue {lowest:.3e} < {-tol:.1e}")
    if lowest < 0.0:
        log.debug("clipping negative density-matrix eigenvalues, largest magnitude %.3e", -lowest)
        values = np.clip(values, 0.0, None)
        values = values / values.sum()
        m = (vectors * values) @ vectors.conj().T
    return m


@dataclass(frozen=True)
class NegativityResult:
    negativity: float
    negative_eigenvalues: np.ndarray
    pt_spectrum: np.ndarray
    pt_trace_norm: float  # ||rho^T1||_1 = 1 + 2N

    @property
    def pt_min_eigenvalue(self) -> float:
        return float(self.pt_spectrum[0])


def negativity(rho, dims: tuple[int, int] | None = (3, 3),
               zero_threshold: float = ZERO_THRESHOLD) -> NegativityResult:
    """Sum of |μ| over eigenvalues μ < -zero_threshold of the partial transpose."""
    m = validate_density_matrix(rho)
    spectrum = eigvalsh(partial_transpose_first(m, dims))
    negative = spectrum[spectrum < -zero_threshold]
    return NegativityResult(
        negativity=float(-negative.sum()) if negative.size else 0.0,
        negative_eigenvalues=negative,
        pt_spectrum=spectrum,
        pt_trace_norm=float(np.abs(spectrum).sum()),
    )


def log_in_base(x: float, base: float) -> float:
    if base == math.e:
        return math.log(x)
    if base == 2:
        return math.log2(x)
    if base == 10:
        return math.log10(x)
    return math.log(x) / math.log(base)


@dataclass(frozen=True)
class RealignmentResult:
    trace_norm: float
    r_value: float
    singular_values: np.ndarray
    entangled_flag: bool
    log_base: float


def realignment_criterion(rho, log_base: float = math.e, block_size: int = 3,
                          zero_threshold: float = ZERO_THRESHOLD) -> RealignmentResult:
    """R = log(Σσ) of the realigned matrix; R > 0 certifies entanglement."""
    if not log_base > 1:
        raise ValueError(f"log base must exceed 1, got {log_base!r}")
    m = validate_density_matrix(rho)
    sigma = singular_values(realign(m, block_size))
    total = float(sigma.sum())
    r = log_in_base(total, log_base)
    return RealignmentResult(
        trace_norm=total,
        r_value=r,
        singular_values=sigma,
        entangled_flag=r > zero_threshold,
        log_base=log_base,
    )
