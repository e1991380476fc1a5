"""
Dense complex linear algebra used throughout the package.

Matrices are plain two-dimensional ``numpy.ndarray`` objects of dtype
``complex128``.  The functions here add the validation and tolerance
handling the rest of the package relies on; the heavy lifting is done by
LAPACK through :mod:`numpy.linalg`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, NonSquare, NotHermitian, NotPSD, ValidationError

HERMITIAN_TOL = 1e-9
PSD_TOL = 1e-9


class HermitianEigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the matching orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a: npt.ArrayLike) -> np.ndarray:
    """Return `a` as a finite 2-D complex128 array, raising on NaN/Inf or wrong rank."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got an array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains non-finite entries")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"matrix of shape {m.shape} is not square")


def operator_norm(a: npt.ArrayLike) -> float:
    """Largest singular value of `a`."""
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def hermitian_part(h: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(H + H^dagger)/2`` after checking that `h` is Hermitian to relative tolerance `tol`.

    Raises
    ------
    NonSquare
        If `h` is not square.
    NotHermitian
        If ``||H - H^dagger||_op > tol * max(1, ||H||_op)``.
    """
    m = as_matrix(h)
    _require_square(m)
    asym = operator_norm(m - m.conj().T)
    scale = max(1.0, operator_norm(m))
    if asym > tol * scale:
        raise NotHermitian(f"||H - H^dagger||_op = {asym:.3e} exceeds {tol:.0e} * {scale:.3e}")
    return (m + m.conj().T) / 2


def hermitian_eig(h: npt.ArrayLike) -> HermitianEigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized before decomposition, so matrices that are
    Hermitian only up to round-off are accepted. Eigenvalues are returned
    in ascending order; the output is deterministic for identical input.

    Examples
    --------
    >>> hermitian_eig([[0, 1], [1, 0]]).eigenvalues
    array([-1.,  1.])
    """
    m = hermitian_part(h)
    w, v = np.linalg.eigh(m)
    return HermitianEigenDecomposition(w, v)


def eigvalsh(h: npt.ArrayLike) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (same checks as :func:`hermitian_eig`)."""
    return np.linalg.eigvalsh(hermitian_part(h))


def psd_sqrt(h: npt.ArrayLike) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-1e-9, 0)`` are treated as round-off and clamped to zero.

    Raises
    ------
    NotPSD
        If an eigenvalue lies below ``-1e-9``.
    """
    w, v = hermitian_eig(h)
    if w.size and w[0] < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} is below -{PSD_TOL:.0e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    s = (v * root) @ v.conj().T
    return (s + s.conj().T) / 2


def singular_values(a: npt.ArrayLike) -> np.ndarray:
    """Singular values of `a` in descending order."""
    m = as_matrix(a)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def kyfan_norm(a: npt.ArrayLike) -> float:
    """Sum of all singular values, ``Tr sqrt(A A^dagger)`` (the trace norm)."""
    return float(np.sum(singular_values(a)))


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> np.ndarray:
    """Kronecker product with the row-major index convention ``(i*rB + k, j*cB + l)``."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_b(rho: npt.ArrayLike, d: int) -> np.ndarray:
    """Trace out the second factor of a ``d^2 x d^2`` operator on C^d (x) C^d."""
    m = as_matrix(rho)
    if m.shape != (d * d, d * d):
        raise DimensionMismatch(f"expected a {d * d}x{d * d} matrix for d={d}, got {m.shape}")
    return np.einsum("ijkj->ik", m.reshape(d, d, d, d))


def unitarity_defect(u: npt.ArrayLike) -> float:
    """``||U^dagger U - I||_op``; zero exactly when `u` is unitary."""
    m = as_matrix(u)
    _require_square(m)
    return operator_norm(m.conj().T @ m - np.eye(m.shape[0]))


def polar_unitary(a: npt.ArrayLike) -> np.ndarray:
    """Unitary factor ``W`` of the polar decomposition ``A = W P``.

    This is the closest unitary to `a` in Frobenius norm, computed from the
    SVD ``A = X S Y^dagger`` as ``W = X Y^dagger``.
    """
    m = as_matrix(a)
    _require_square(m)
    x, _, yh = np.linalg.svd(m)
    return x @ yh
