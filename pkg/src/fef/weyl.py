"""
Weyl-Heisenberg (clock and shift) operator basis, generalized Bell basis and
generalized Gell-Mann matrices for a single d-level system.

Index convention: the operator ``U_st = h^t g^s`` is stored at flat index
``n = s*d + t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from .errors import DimensionMismatch, DimensionTooSmall
from .linalg import as_matrix


def _check_d(d: int) -> int:
    if int(d) != d or d < 2:
        raise DimensionTooSmall(f"local dimension must be an integer >= 2, got {d!r}")
    return int(d)


def psi_plus(d: int) -> np.ndarray:
    """The maximally entangled vector ``(1/sqrt d) sum_i |ii>`` of length d^2."""
    d = _check_d(d)
    return np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """The d^2 unitaries ``U_st = h^t g^s``.

    Attributes
    ----------
    d : int
        Local dimension.
    shift : ndarray
        ``h`` with ``h|j> = |j+1 mod d>``.
    clock : ndarray
        ``g`` with ``g|j> = omega^j |j>``.
    units : ndarray, shape (d*d, d, d)
        ``units[s*d + t] = h^t g^s``.
    omega : complex
        ``exp(-2 pi i / d)``.
    """

    d: int
    shift: np.ndarray
    clock: np.ndarray
    units: np.ndarray
    omega: complex

    def index(self, s: int, t: int) -> int:
        return s * self.d + t

    def unit(self, s: int, t: int) -> np.ndarray:
        return self.units[self.index(s, t)]


@dataclass(frozen=True, eq=False)
class BellBasis:
    """Generalized Bell vectors, one per row, index-aligned with :attr:`OperatorBasis.units`."""

    d: int
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class GellMannBasis:
    """The d^2 - 1 generalized Gell-Mann matrices normalized to ``Tr(l_i l_j) = 2 delta_ij``."""

    d: int
    generators: np.ndarray

    def __len__(self) -> int:
        return len(self.generators)


def _omega_power(k: np.ndarray | int, d: int) -> np.ndarray:
    # reduce the exponent mod d first so equal phases are bit-identical
    return np.exp(-2j * np.pi * (np.asarray(k) % d) / d)


@lru_cache(maxsize=None)
def _operator_basis(d: int) -> OperatorBasis:
    j = np.arange(d)
    shift = np.zeros((d, d), dtype=np.complex128)
    shift[(j + 1) % d, j] = 1.0
    clock = np.diag(_omega_power(j, d))
    units = np.empty((d * d, d, d), dtype=np.complex128)
    for s in range(d):
        gs = _omega_power(j * s, d)
        for t in range(d):
            # h^t g^s |j> = omega^{js} |j+t>
            u = np.zeros((d, d), dtype=np.complex128)
            u[(j + t) % d, j] = gs
            units[s * d + t] = u
    for a in (shift, clock, units):
        a.setflags(write=False)
    return OperatorBasis(d=d, shift=shift, clock=clock, units=units, omega=complex(_omega_power(1, d)))


def operator_basis(d: int) -> OperatorBasis:
    """Build the clock-and-shift unitary basis for local dimension `d`.

    Raises
    ------
    DimensionTooSmall
        If ``d < 2``.

    Examples
    --------
    >>> b = operator_basis(2)
    >>> b.unit(0, 1).real
    array([[0., 1.],
           [1., 0.]])
    """
    return _operator_basis(_check_d(d))


def bell_basis(basis: OperatorBasis) -> BellBasis:
    """Generalized Bell vectors ``|Phi_n> = (I (x) conj(U_n)) |psi_+>``."""
    d = basis.d
    # ((I (x) V)|psi_+>)_{(i,j)} = V[j, i] / sqrt(d)
    vectors = np.conj(basis.units).transpose(0, 2, 1).reshape(d * d, d * d) / np.sqrt(d)
    vectors.setflags(write=False)
    return BellBasis(d=d, vectors=vectors)


@lru_cache(maxsize=None)
def _gellmann(d: int) -> GellMannBasis:
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    gens = []
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = m[k, j] = 1.0
        gens.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=np.complex128)
        m[j, k] = -1j
        m[k, j] = 1j
        gens.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(np.complex128))
    generators = np.array(gens)
    generators.setflags(write=False)
    return GellMannBasis(d=d, generators=generators)


def gellmann_generators(d: int) -> GellMannBasis:
    """Generalized Gell-Mann matrices for SU(d).

    Ordered as: symmetric off-diagonal ``E_jk + E_kj`` (j < k, lexicographic),
    antisymmetric ``-i(E_jk - E_kj)`` in the same order, then the d - 1
    diagonal generators. For ``d = 2`` this gives the Pauli matrices X, Y, Z.
    """
    return _gellmann(_check_d(d))


def expand_in_basis(w: npt.ArrayLike, basis: OperatorBasis) -> np.ndarray:
    """Coefficients ``z_n = Tr(U_n^dagger W) / d`` so that ``W = sum_n z_n U_n``."""
    m = as_matrix(w)
    d = basis.d
    if m.shape != (d, d):
        raise DimensionMismatch(f"expected a {d}x{d} matrix, got {m.shape}")
    return np.einsum("nji,ji->n", basis.units.conj(), m) / d


def reconstruct(z: npt.ArrayLike, basis: OperatorBasis) -> np.ndarray:
    """Inverse of :func:`expand_in_basis`."""
    return np.tensordot(np.asarray(z, dtype=np.complex128), basis.units, axes=1)
