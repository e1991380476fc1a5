"""
Variational lower bound on the fully entangled fraction.

The FEF is the maximum over unitaries ``U`` of

    f(U) = <psi_+| (I (x) U^dagger) rho (I (x) U) |psi_+>.

Any unitary gives a lower bound; we ascend ``f`` on the unitary group with a
projected gradient, backtracking line search and polar retraction, from
several starting points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import numpy.typing as npt

from .errors import NotUnitary, WrongDimension
from .linalg import as_matrix, polar_unitary, unitarity_defect
from .states import DensityMatrix

UNITARY_TOL = 1e-9
REL_GAIN_TOL = 1e-12
INITIAL_STEP = 0.5
STEP_SHRINK = 0.5
STEP_GROWTH = 2.0
MAX_STEP = 1e4
MAX_HALVINGS = 40
DEFAULT_RESTARTS = 32
DEFAULT_MAX_ITERS = 500


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Sample a d x d unitary from the Haar measure.

    QR-factorizes a complex Ginibre matrix and rescales each column of ``Q``
    by the phase of the matching diagonal entry of ``R``, which makes the
    factorization unique and the distribution invariant.
    """
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def _vec(u: np.ndarray) -> np.ndarray:
    # (I (x) U)|psi_+> has entry U[j, i]/sqrt(d) at index (i, j)
    return u.T.reshape(-1) / np.sqrt(u.shape[0])


def _objective(rho: np.ndarray, u: np.ndarray) -> float:
    v = _vec(u)
    return float(np.vdot(v, rho @ v).real)


def objective(rho: DensityMatrix, u: npt.ArrayLike) -> float:
    """Overlap of `rho` with the maximally entangled vector ``(I (x) U)|psi_+>``.

    Raises
    ------
    WrongDimension
        If `u` is not d x d.
    NotUnitary
        If ``||U^dagger U - I||_op > 1e-9``.
    """
    u = as_matrix(u)
    if u.shape != (rho.d, rho.d):
        raise WrongDimension(f"expected a {rho.d}x{rho.d} unitary, got {u.shape}")
    defect = unitarity_defect(u)
    if defect > UNITARY_TOL:
        raise NotUnitary(f"||U^dagger U - I||_op = {defect:.3e}")
    return _objective(rho.mat, u)


def euclidean_gradient(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Gradient ``2 df/d(conj U)`` of the objective with respect to the entries of ``U``."""
    d = u.shape[0]
    rv = rho @ _vec(u)
    return 2.0 * rv.reshape(d, d).T / np.sqrt(d)


@dataclass
class AscentTrace:
    """Result of a single ascent run from one starting unitary."""

    unitary: np.ndarray
    value: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)


def ascend(
    rho: np.ndarray,
    u0: np.ndarray,
    max_iters: int = DEFAULT_MAX_ITERS,
    record: bool = False,
) -> AscentTrace:
    """Riemannian gradient ascent of the objective on U(d), starting from `u0`.

    Each iteration projects the Euclidean gradient ``G`` onto the tangent
    space as ``U Omega`` with ``Omega = (U^dagger G - G^dagger U)/2``, tries
    ``polar(U + t U Omega)`` with halving ``t`` (at most 40 halvings) and
    accepts the first strict improvement. The first trial step is 0.5; later
    iterations start from twice the last accepted step, which matters on the
    flat maxima typical of mixed states. Stops once the relative gain
    drops below 1e-12, when no step improves, or after `max_iters`
    iterations. Accepted values are therefore non-decreasing.
    """
    u = u0
    f = _objective(rho, u)
    history = [f] if record else []
    converged = False
    it = 0
    accepted = INITIAL_STEP / STEP_GROWTH
    while it < max_iters:
        it += 1
        g = euclidean_gradient(rho, u)
        a = u.conj().T @ g
        omega = (a - a.conj().T) / 2
        if not np.any(omega):
            converged = True
            break
        step = min(accepted * STEP_GROWTH, MAX_STEP)
        for _ in range(MAX_HALVINGS + 1):
            cand = polar_unitary(u + step * (u @ omega))
            fc = _objective(rho, cand)
            if fc > f:
                break
            step *= STEP_SHRINK
        else:
            converged = True
            break
        gain = fc - f
        u, f, accepted = cand, fc, step
        if record:
            history.append(f)
        if gain <= REL_GAIN_TOL * abs(f):
            converged = True
            break
    return AscentTrace(unitary=u, value=f, iterations=it, converged=converged, history=history)


@dataclass(frozen=True, eq=False)
class EstimateResult:
    """Best lower bound found by :func:`estimate_fef` and how it was reached."""

    lower_bound: float
    best_unitary: np.ndarray
    restarts_used: int
    iterations: int
    converged: bool
    seed: int

    def to_dict(self, emit_unitary: bool = False) -> dict:
        out = {
            "lower_bound": self.lower_bound,
            "restarts_used": self.restarts_used,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
        }
        if emit_unitary:
            out["best_unitary"] = [[[z.real, z.imag] for z in row] for row in self.best_unitary]
        return out


def start_unitary(d: int, seed: int, restart: int) -> np.ndarray:
    """Starting point of a restart: the identity for restart 0, else Haar with seed ``seed + restart``."""
    if restart == 0:
        return np.eye(d, dtype=np.complex128)
    return haar_unitary(d, np.random.default_rng(seed + restart))


def estimate_fef(
    rho: DensityMatrix,
    restarts: int = DEFAULT_RESTARTS,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = 0,
    callback: Callable[[int, AscentTrace], None] | None = None,
) -> EstimateResult:
    """Multi-start lower bound on the FEF of `rho`.

    The first restart begins at ``U = I`` so the result is never below the
    single fraction ``<psi_+|rho|psi_+>``. Ties between restarts go to the
    lowest restart index, so the output depends only on the arguments.

    Parameters
    ----------
    rho : DensityMatrix
    restarts : int
        Number of starting points (>= 1).
    max_iters : int
        Iteration cap per restart.
    seed : int
        Restart ``k >= 1`` starts from a Haar sample seeded with ``seed + k``.
    callback : callable, optional
        Called as ``callback(k, trace)`` after each restart, with the
        per-iteration objective history recorded.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    best: AscentTrace | None = None
    for k in range(restarts):
        trace = ascend(rho.mat, start_unitary(rho.d, seed, k), max_iters, record=callback is not None)
        if callback is not None:
            callback(k, trace)
        if best is None or trace.value > best.value:
            best = trace
    u = best.unitary
    return EstimateResult(
        lower_bound=_objective(rho.mat, u),
        best_unitary=u,
        restarts_used=restarts,
        iterations=best.iterations,
        converged=best.converged,
        seed=seed,
    )


def su2(theta, phi, chi) -> np.ndarray:
    """``[[e^{i phi} cos t, e^{i chi} sin t], [-e^{-i chi} sin t, e^{-i phi} cos t]]``, broadcasting over the angles."""
    theta, phi, chi = np.broadcast_arrays(theta, phi, chi)
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty(theta.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = np.exp(1j * phi) * c
    out[..., 0, 1] = np.exp(1j * chi) * s
    out[..., 1, 0] = -np.exp(-1j * chi) * s
    out[..., 1, 1] = np.exp(-1j * phi) * c
    return out


def brute_force_fef_d2(rho: DensityMatrix, grid: int = 24) -> float:
    """Two-qubit FEF by exhaustive search over SU(2), polished by 100 ascent steps.

    The global phase of ``U`` does not affect the objective, so the
    three-angle SU(2) parametrization covers every candidate. `grid` points
    are used per angle (``theta`` in ``[0, pi/2]``, both phases in ``[0, 2 pi)``).
    """
    if rho.d != 2:
        raise WrongDimension(f"brute force search is only for d=2, got d={rho.d}")
    if grid < 24:
        raise ValueError(f"grid must be >= 24, got {grid}")
    theta = np.linspace(0.0, np.pi / 2, grid)
    phase = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    us = su2(*np.meshgrid(theta, phase, phase, indexing="ij")).reshape(-1, 2, 2)
    vs = us.transpose(0, 2, 1).reshape(-1, 4) / np.sqrt(2)
    values = np.einsum("ni,ij,nj->n", vs.conj(), rho.mat, vs).real
    k = int(np.argmax(values))
    polished = ascend(rho.mat, us[k], max_iters=100)
    return max(float(values[k]), polished.value)
