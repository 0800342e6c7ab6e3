import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_ket(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_product_mixture(rng, terms=4, d=3):
    """Convex mixture of random pure product states."""
    weights = rng.dirichlet(np.ones(terms))
    rho = np.zeros((d * d, d * d), dtype=complex)
    for w in weights:
        v = np.kron(random_ket(rng, d), random_ket(rng, d))
        rho += w * np.outer(v, v.conj())
    return rho


def projector(v):
    return np.outer(v, np.conj(v))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
