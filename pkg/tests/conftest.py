import numpy as np
import pytest

ACCEPTANCE_LINES = []


def haar_ket(rng, dim=2):
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return z / np.linalg.norm(z)


def random_density(rng, dim=2, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def helstrom(rho0, rho1, p0=0.5):
    """Two-state optimum from the trace norm of the weighted difference."""
    w = np.linalg.eigvalsh(p0 * rho0 - (1 - p0) * rho1)
    return 0.5 + 0.5 * np.sum(np.abs(w))


@pytest.fixture
def rng():
    return np.random.default_rng(20251015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_coding_monte_carlo(n, M, q, eps, samples, seed):
    """Mean ML success of i.i.d. uniform random codes over the q-SC, with standard error.

    Message 0 is sent (by symmetry); ``eps`` is the total symbol error probability.
    Ties at the minimum Hamming distance, including repeated codewords, are split evenly.
    """
    rng = np.random.default_rng(seed)
    values = np.empty(samples)
    chunk = 200_000
    for start in range(0, samples, chunk):
        size = min(chunk, samples - start)
        codes = rng.integers(0, q, size=(size, M, n))
        flips = rng.random((size, n)) < eps
        shift = rng.integers(1, q, size=(size, n))
        received = np.where(flips, (codes[:, 0, :] + shift) % q, codes[:, 0, :])
        dist = (codes != received[:, None, :]).sum(axis=2)
        at_min = dist == dist.min(axis=1, keepdims=True)
        values[start:start + size] = at_min[:, 0] / at_min.sum(axis=1)
    return values.mean(), values.std(ddof=1) / np.sqrt(samples)


def random_code(rng, n, M, q):
    """Distinct codewords drawn uniformly without replacement."""
    idx = rng.choice(q**n, size=M, replace=False)
    return np.array([[(i // q ** (n - 1 - j)) % q for j in range(n)] for i in idx])
