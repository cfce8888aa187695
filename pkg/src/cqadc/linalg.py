"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Tensor products
follow the convention that the left factor is the most significant index, so
the basis index of ``|b_1> (x) ... (x) |b_n>`` is ``sum_j b_j 2**(n - j)``.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

MAX_DIM = 2**14
HERMITIAN_TOL = 1e-10


class HermitianSpectrum(NamedTuple):
    """Eigenvalues sorted descending with matching column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array, raising on bad input."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValidationError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def hermitian_defect(a: np.ndarray) -> float:
    """Frobenius norm of ``a - a^dagger``."""
    return float(np.linalg.norm(a - dagger(a)))


def hermitize(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Symmetrize ``(a + a^dagger) / 2``, rejecting inputs that are not Hermitian to ``tol``."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    defect = hermitian_defect(m)
    if defect > tol:
        raise ValidationError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    return (m + dagger(m)) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the most significant factor."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > MAX_DIM:
        raise DimensionError(f"tensor product of size {rows}x{cols} exceeds {MAX_DIM}")
    return np.kron(a, b)


def kron_all(factors: Sequence) -> np.ndarray:
    """Left-to-right tensor product of a non-empty sequence of matrices."""
    if len(factors) == 0:
        raise DimensionError("cannot take the tensor product of an empty list")
    return reduce(kron, factors[1:], as_matrix(factors[0]))


def hermitian_eig(a) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized before calling LAPACK; a Hermitian defect above
    ``1e-10`` raises :class:`ValidationError`.

    Returns
    -------
    HermitianSpectrum
        Real eigenvalues in descending order and a unitary matrix whose
        columns are the corresponding eigenvectors.
    """
    h = hermitize(a)
    w, v = np.linalg.eigh(h)
    return HermitianSpectrum(w[::-1].copy(), v[:, ::-1].copy())


def eigvalsh(a) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (validated like :func:`hermitian_eig`)."""
    return np.linalg.eigvalsh(hermitize(a))


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvalsh(a))))


def is_psd(a, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``a`` is at least ``-tol``."""
    try:
        w = eigvalsh(a)
    except ValidationError:
        return False
    return bool(w[0] >= -tol)


def psd_sqrt(a) -> np.ndarray:
    """Principal square root of a PSD matrix; tiny negative eigenvalues are clipped."""
    w, v = np.linalg.eigh(hermitize(a))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def projector(vec) -> np.ndarray:
    """Rank-one projector onto the normalized column vector ``vec``."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return np.outer(v, np.conj(v))
