"""
Bipartite d x d density matrices: validation, named families, Bloch
decomposition and JSON file I/O.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
import numpy.typing as npt

from .errors import (
    DimensionMismatch,
    NotPSD,
    ParamOutOfRange,
    ParseError,
    TraceNotOne,
    ValidationError,
)
from .linalg import as_matrix, eigvalsh, hermitian_part, partial_trace_b
from .weyl import GellMannBasis, gellmann_generators, psi_plus

STATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state on C^d (x) C^d.

    Instances are only produced by :func:`validate` (or the constructors
    that call it), so ``mat`` is always Hermitian, unit-trace and PSD to
    within 1e-9.
    """

    d: int
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.d * self.d

    def reduced_a(self) -> np.ndarray:
        return partial_trace_b(self.mat, self.d)

    def eigvals(self) -> np.ndarray:
        return eigvalsh(self.mat)


def validate(mat: npt.ArrayLike, d: int) -> DensityMatrix:
    """Check that `mat` is a density matrix on C^d (x) C^d and wrap it.

    Hermiticity and trace deviations up to 1e-9 are repaired by
    symmetrizing and renormalizing; anything larger is rejected.

    Raises
    ------
    DimensionMismatch, NotHermitian, TraceNotOne, NotPSD
    """
    m = as_matrix(mat)
    if int(d) != d or d < 1 or m.shape != (d * d, d * d):
        raise DimensionMismatch(f"expected a {d * d}x{d * d} matrix for d={d}, got {m.shape}")
    h = hermitian_part(m, tol=STATE_TOL)
    tr = np.trace(h).real
    if abs(tr - 1.0) > STATE_TOL:
        raise TraceNotOne(f"trace is {tr!r}, expected 1 within {STATE_TOL:.0e}")
    h = h / tr
    lo = np.linalg.eigvalsh(h)[0]
    if lo < -STATE_TOL:
        raise NotPSD(f"minimum eigenvalue {lo:.3e} is below -{STATE_TOL:.0e}")
    h.setflags(write=False)
    return DensityMatrix(d=int(d), mat=h)


def pure_state(psi: npt.ArrayLike, d: int) -> DensityMatrix:
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    v = v / np.linalg.norm(v)
    return validate(np.outer(v, v.conj()), d)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamOutOfRange(msg)


def max_entangled(d: int) -> DensityMatrix:
    """The projector ``P_+ = |psi_+><psi_+|``."""
    return pure_state(psi_plus(d), d)


def max_mixed(d: int) -> DensityMatrix:
    return validate(np.eye(d * d) / (d * d), d)


def isotropic(d: int, f: float) -> DensityMatrix:
    """``(1-f)(I - P_+)/(d^2 - 1) + f P_+``, whose singlet fraction is `f`."""
    _require(int(d) == d and d >= 2, f"d must be an integer >= 2, got {d!r}")
    _require(0.0 <= f <= 1.0, f"f must lie in [0, 1], got {f!r}")
    p = np.outer(psi_plus(d), psi_plus(d))
    n = d * d
    return validate((1.0 - f) * (np.eye(n) - p) / (n - 1) + f * p, d)


def horodecki_3x3(a: float) -> DensityMatrix:
    """Horodecki's bound entangled two-qutrit family, ``0 <= a <= 1``."""
    _require(0.0 <= a <= 1.0, f"a must lie in [0, 1], got {a!r}")
    m = np.zeros((9, 9))
    m[np.arange(9), np.arange(9)] = a
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i, j] = a
    m[6, 6] = m[8, 8] = (1.0 + a) / 2.0
    m[6, 8] = m[8, 6] = math.sqrt(1.0 - a * a) / 2.0
    return validate(m / (8.0 * a + 1.0), 3)


def _sigma_pm() -> tuple[np.ndarray, np.ndarray]:
    def proj(pairs):
        m = np.zeros((9, 9))
        for i, j in pairs:
            m[3 * i + j, 3 * i + j] = 1.0 / 3.0
        return m

    return proj([(0, 1), (1, 2), (2, 0)]), proj([(1, 0), (2, 1), (0, 2)])


def alpha_family_3x3(alpha: float) -> DensityMatrix:
    """``2/7 P_+ + alpha/7 sigma_+ + (5 - alpha)/7 sigma_-`` for ``0 <= alpha <= 5``."""
    _require(0.0 <= alpha <= 5.0, f"alpha must lie in [0, 5], got {alpha!r}")
    sp, sm = _sigma_pm()
    p = np.outer(psi_plus(3), psi_plus(3))
    return validate(2.0 / 7.0 * p + alpha / 7.0 * sp + (5.0 - alpha) / 7.0 * sm, 3)


def weakly_mixed_vector(x: float) -> np.ndarray:
    """Unit vector proportional to ``x|00> + |11> + |22>``."""
    v = np.zeros(9, dtype=np.complex128)
    v[[0, 4, 8]] = (x, 1.0, 1.0)
    return v / math.sqrt(x * x + 2.0)


def weakly_mixed_3x3(p: float, x: float) -> DensityMatrix:
    """White noise mixed with a pure state: ``(1-p)/9 I + p |psi_x><psi_x|``."""
    _require(0.0 <= p <= 1.0, f"p must lie in [0, 1], got {p!r}")
    _require(math.isfinite(x), f"x must be finite, got {x!r}")
    v = weakly_mixed_vector(x)
    return validate((1.0 - p) / 9.0 * np.eye(9) + p * np.outer(v, v.conj()), 3)


# ---------------------------------------------------------------------------
# Bloch decomposition


@dataclass(frozen=True, eq=False)
class BlochDecomposition:
    """Local Bloch vectors ``r``, ``s`` and correlation matrix ``N`` of a state.

    The state is recovered as::

        rho = I/d^2 + (1/d) sum_i r_i l_i (x) I + (1/d) sum_j s_j I (x) l_j
              + sum_ij N_ij l_i (x) l_j
    """

    d: int
    r: np.ndarray
    s: np.ndarray
    N: np.ndarray

    def reconstruct(self, gm: GellMannBasis | None = None) -> np.ndarray:
        gm = gm or gellmann_generators(self.d)
        d = self.d
        lam = gm.generators
        eye = np.eye(d)
        out = np.eye(d * d, dtype=np.complex128) / (d * d)
        out += np.kron(np.tensordot(self.r, lam, axes=1), eye) / d
        out += np.kron(eye, np.tensordot(self.s, lam, axes=1)) / d
        # sum_ij N_ij l_i (x) l_j, assembled as a 4-index tensor
        t = np.einsum("ij,iac,jbe->abce", self.N, lam, lam).reshape(d * d, d * d)
        return out + t


def _as_array(rho: DensityMatrix | npt.ArrayLike) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)


def bloch_decompose(rho: DensityMatrix | npt.ArrayLike, gm: GellMannBasis) -> BlochDecomposition:
    """Compute ``r_i = Tr(rho l_i (x) I)/2``, ``s_j = Tr(rho I (x) l_j)/2`` and ``N_ij = Tr(rho l_i (x) l_j)/4``.

    `rho` may be a :class:`DensityMatrix` or any ``d^2 x d^2`` operator (the
    projector ``P_+`` is the usual non-state use).
    """
    m = _as_array(rho)
    d = gm.d
    if m.shape != (d * d, d * d):
        raise DimensionMismatch(f"Gell-Mann basis is for d={d}, operator has shape {m.shape}")
    t = m.reshape(d, d, d, d)  # t[i, j, k, l] = <ij|rho|kl>
    lam = gm.generators
    # Tr(rho (A (x) B)) = sum t[i,j,k,l] A[k,i] B[l,j]
    rho_a = np.einsum("ijkj->ik", t)
    rho_b = np.einsum("ijil->jl", t)
    r = np.einsum("ik,aki->a", rho_a, lam).real / 2
    s = np.einsum("jl,blj->b", rho_b, lam).real / 2
    n = np.einsum("ijkl,aki,blj->ab", t, lam, lam, optimize=True).real / 4
    return BlochDecomposition(d=d, r=r, s=s, N=n)


# ---------------------------------------------------------------------------
# Named families


@dataclass(frozen=True)
class StateFamily:
    """A named, parametrized family of states that can be addressed by name."""

    name: str
    params: tuple[str, ...]
    build: Callable[..., DensityMatrix]
    fixed_d: int | None = None
    defaults: Mapping[str, float] | None = None

    def make(self, params: Mapping[str, float], d: int | None = None) -> DensityMatrix:
        unknown = set(params) - set(self.params)
        if unknown:
            raise ValidationError(f"unknown parameter(s) for family {self.name!r}: {sorted(unknown)}")
        values = dict(self.defaults or {})
        values.update(params)
        missing = [p for p in self.params if p not in values]
        if missing:
            raise ValidationError(f"family {self.name!r} requires parameter(s) {missing}")
        if self.fixed_d is not None:
            if d is not None and d != self.fixed_d:
                raise DimensionMismatch(f"family {self.name!r} is defined only for d={self.fixed_d}")
            return self.build(**{k: values[k] for k in self.params})
        if d is None:
            raise ValidationError(f"family {self.name!r} requires a local dimension d")
        return self.build(int(d), **{k: values[k] for k in self.params})


FAMILIES: dict[str, StateFamily] = {
    f.name: f
    for f in [
        StateFamily("horodecki3x3", ("a",), horodecki_3x3, fixed_d=3),
        StateFamily("alpha3x3", ("alpha",), alpha_family_3x3, fixed_d=3),
        StateFamily("weakly-mixed3x3", ("p", "x"), weakly_mixed_3x3, fixed_d=3),
        StateFamily("isotropic", ("f",), isotropic),
        StateFamily("max-entangled", (), max_entangled),
        StateFamily("max-mixed", (), max_mixed),
    ]
}


def make_state(family: str, params: Mapping[str, float] | None = None, d: int | None = None) -> DensityMatrix:
    """Build a member of a named family, e.g. ``make_state("alpha3x3", {"alpha": 4})``."""
    try:
        fam = FAMILIES[family]
    except KeyError:
        raise ValidationError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return fam.make(params or {}, d)


# ---------------------------------------------------------------------------
# File I/O


def _parse_entry(e) -> complex:
    if not isinstance(e, list) or len(e) != 2:
        raise ParseError(f"matrix entry must be a [re, im] pair, got {e!r}")
    re, im = e
    for v in (re, im):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(f"matrix entry components must be finite numbers, got {e!r}")
    return complex(re, im)


def parse_state(obj) -> tuple[int, np.ndarray]:
    """Parse the decoded JSON object of a state file into ``(d, matrix)`` without validating the state."""
    if not isinstance(obj, dict):
        raise ParseError("state file must contain a JSON object")
    for key in ("d", "matrix"):
        if key not in obj:
            raise ParseError(f"state file is missing key {key!r}")
    d = obj["d"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise ParseError(f"'d' must be a positive integer, got {d!r}")
    rows = obj["matrix"]
    n = d * d
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"'matrix' must have {n} rows for d={d}")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {i} must have {n} entries (ragged matrix)")
        out[i] = [_parse_entry(e) for e in row]
    return d, out


def _reject_constant(name: str):
    # json accepts NaN/Infinity literals by default
    raise ParseError(f"non-finite number {name} in state file")


def load_state(path: str | os.PathLike) -> DensityMatrix:
    """Read and validate a JSON state file ``{"d": int, "matrix": [[[re, im], ...], ...]}``.

    Raises
    ------
    ParseError
        Unreadable file, malformed JSON, missing keys, ragged rows or non-finite numbers.
    ValidationError
        The parsed matrix is not a valid density matrix (the concrete
        subclass, e.g. :class:`TraceNotOne`, names the failure).
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    d, mat = parse_state(obj)
    return validate(mat, d)


def state_to_json(mat: npt.ArrayLike, d: int) -> str:
    m = as_matrix(mat)
    rows = ",\n".join(
        "  [" + ", ".join(f"[{z.real:.17g}, {z.imag:.17g}]" for z in row) + "]" for row in m
    )
    return f'{{"d": {int(d)}, "matrix": [\n{rows}\n]}}\n'


def save_state(rho: DensityMatrix | npt.ArrayLike, path: str | os.PathLike, d: int | None = None) -> None:
    """Write a state file with 17 significant digits per component (atomic replace)."""
    if isinstance(rho, DensityMatrix):
        d, mat = rho.d, rho.mat
    else:
        if d is None:
            raise ValidationError("d is required when saving a raw matrix")
        mat = rho
    text = state_to_json(mat, d)
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def random_state(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state ``G G^dagger / Tr`` with complex Gaussian ``G`` of shape ``(d^2, rank)``."""
    n = d * d
    k = n if rank is None else rank
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    m = g @ g.conj().T
    return validate(m / np.trace(m).real, d)


def random_pure_state(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector of length d^2."""
    v = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
    return v / np.linalg.norm(v)


__all__ = [
    "BlochDecomposition",
    "DensityMatrix",
    "FAMILIES",
    "StateFamily",
    "alpha_family_3x3",
    "bloch_decompose",
    "horodecki_3x3",
    "isotropic",
    "load_state",
    "make_state",
    "max_entangled",
    "max_mixed",
    "pure_state",
    "random_pure_state",
    "random_state",
    "save_state",
    "validate",
    "weakly_mixed_3x3",
]
