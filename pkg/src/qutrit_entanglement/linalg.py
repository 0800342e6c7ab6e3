"""
Dense complex linear algebra helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Sizes are not
fixed, so everything here works for the 9x9 two-qutrit operators as well as
for small test matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (nondecreasing) and orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def hermiticity_error(a) -> float:
    """max |A[i,j] - conj(A[j,i])|; ``inf`` for non-square input."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        return float("inf")
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(a) <= tol


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; ``(a ⊗ b)[i*p + k, j*q + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def hermitian_eigen(a, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Raises
    ------
    NotHermitian
        If the matrix is not square or deviates from Hermitian by more than
        ``tol`` (absolute, max entry).
    """
    m = as_matrix(a)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"matrix is not Hermitian (max deviation {err:.3e} > {tol:.1e})")
    # symmetrize so the solver sees an exactly Hermitian input
    values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    return Spectrum(values=values.astype(float), vectors=vectors)


def eigvalsh(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(a)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitian(f"matrix is not Hermitian (max deviation {err:.3e} > {tol:.1e})")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def singular_values(a) -> np.ndarray:
    """Singular values in nonincreasing order."""
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def trace_norm(a) -> float:
    return float(np.sum(singular_values(a)))
