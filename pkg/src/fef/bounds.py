"""
Upper bounds, exactness certificates and exact special cases for the fully
entangled fraction (FEF)

    F(rho) = max_U <psi_+| (I (x) U^dagger) rho (I (x) U) |psi_+>

of a state on C^d (x) C^d.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from .errors import ConsistencyError, HermiticityViolation, NotNormalized, ParamOutOfRange, WrongDimension
from .estimator import ascend
from .linalg import eigvalsh, hermitian_eig, kyfan_norm, polar_unitary, psd_sqrt, unitarity_defect
from .states import DensityMatrix, bloch_decompose
from .weyl import GellMannBasis, OperatorBasis, gellmann_generators, operator_basis, psi_plus

M_HERMITIAN_TOL = 1e-10
CLUSTER_TOL = 1e-9
CERTIFICATE_TOL = 1e-8
PURE_TOL = 1e-9
CLUSTER_RANDOM_TRIES = 64


def _lifted_vectors(basis: OperatorBasis) -> np.ndarray:
    """Columns ``(I (x) U'_l)|psi_+>`` for the 2d^2 real-coefficient family ``U'_l = U_l, i U_l``."""
    d = basis.d
    # ((I (x) U)|psi_+>)_{(i,j)} = U[j, i] / sqrt(d)
    w = basis.units.transpose(0, 2, 1).reshape(d * d, d * d).T / np.sqrt(d)
    return np.hstack([w, 1j * w])


def thm1_matrix(rho: DensityMatrix, basis: OperatorBasis | None = None) -> np.ndarray:
    """The 2d^2 x 2d^2 matrix ``M`` with ``F(U) = sum_mn x_m x_n M_mn``.

    Here ``U = sum_l x_l U'_l`` with real ``x``; ``M`` has the block form
    ``[[T, iT], [-iT, T]]`` where ``T_nm = <psi_+|(I (x) U_n^dagger) rho (I (x) U_m)|psi_+>``.
    """
    basis = basis or operator_basis(rho.d)
    if basis.d != rho.d:
        raise WrongDimension(f"operator basis is for d={basis.d}, state has d={rho.d}")
    w = _lifted_vectors(basis)
    return w.conj().T @ rho.mat @ w


def thm1_bound(rho: DensityMatrix, basis: OperatorBasis | None = None) -> float:
    """Largest eigenvalue of ``Re(M)``, an upper bound on the FEF.

    Maximizing the real quadratic form ``x^T Re(M) x`` over the unit sphere
    relaxes the unitarity of ``U`` to ``Tr(U U^dagger) = d``.

    Raises
    ------
    HermiticityViolation
        If ``M`` fails ``M_mn^* = M_nm`` to 1e-10 (an internal error).
    """
    m = thm1_matrix(rho, basis)
    defect = np.max(np.abs(m - m.conj().T))
    if defect > M_HERMITIAN_TOL:
        raise HermiticityViolation(f"max |M - M^dagger| = {defect:.3e}")
    return float(eigvalsh(m.real)[-1])


@lru_cache(maxsize=None)
def _correlation_of_p_plus(d: int) -> np.ndarray:
    p = np.outer(psi_plus(d), psi_plus(d).conj())
    n = bloch_decompose(p, gellmann_generators(d)).N
    n.setflags(write=False)
    return n


def correlation_bound(rho: DensityMatrix, gm: GellMannBasis | None = None) -> float:
    """``1/d^2 + 4 ||N(rho)^T N(P_+)||_KF`` with ``N`` the Gell-Mann correlation matrix."""
    d = rho.d
    gm = gm or gellmann_generators(d)
    if gm.d != d:
        raise WrongDimension(f"Gell-Mann basis is for d={gm.d}, state has d={d}")
    n_rho = bloch_decompose(rho, gm).N
    if gm is gellmann_generators(d):
        n_p = _correlation_of_p_plus(d)
    else:
        n_p = bloch_decompose(np.outer(psi_plus(d), psi_plus(d).conj()), gm).N
    return 1.0 / d**2 + 4.0 * kyfan_norm(n_rho.T @ n_p)


def spectral_bound(rho: DensityMatrix) -> float:
    """Largest eigenvalue of `rho` (its operator norm)."""
    return float(rho.eigvals()[-1])


@dataclass(frozen=True, eq=False)
class ExactnessCertificate:
    """Top eigenvector of a state whose rescaled coefficient matrix is unitary.

    When ``unitarity_defect <= 1e-8`` the spectral bound ``lambda_max`` is the
    exact FEF, attained by the maximally entangled vector ``psi``.
    """

    lambda_max: float
    A: np.ndarray
    unitarity_defect: float
    source: str

    @property
    def valid(self) -> bool:
        return self.unitarity_defect <= CERTIFICATE_TOL

    def describe(self) -> str:
        return (
            f"top eigenvector ({self.source}) reshapes to sqrt(d)*a_ij unitary "
            f"(defect {self.unitarity_defect:.1e}); F = lambda_max"
        )


def _fix_phase(a: np.ndarray) -> np.ndarray:
    tr = np.trace(a)
    if abs(tr) > 1e-6:
        return a * (abs(tr) / tr)
    k = np.argmax(np.abs(a))
    z = a.flat[k]
    return a * (abs(z) / z)


def _candidate(vec: np.ndarray, d: int, lam: float, source: str) -> ExactnessCertificate:
    a = _fix_phase(np.sqrt(d) * vec.reshape(d, d))
    return ExactnessCertificate(lambda_max=lam, A=a, unitarity_defect=unitarity_defect(a), source=source)


def _project_to_span_and_entangled(proj: np.ndarray, v: np.ndarray, d: int, iters: int = 500) -> np.ndarray | None:
    # alternate between the cluster span and the nearest maximally entangled vector
    w = None
    for _ in range(iters):
        w = proj @ v
        norm = np.linalg.norm(w)
        if norm < 0.5:
            return None
        w = w / norm
        v_next = polar_unitary(w.reshape(d, d)).reshape(-1) / np.sqrt(d)
        if np.linalg.norm(v_next - v) < 1e-15:
            break
        v = v_next
    return w


def exactness_certificate(rho: DensityMatrix, seed: int = 0) -> ExactnessCertificate | None:
    """Try to certify that the spectral bound equals the FEF.

    Every eigenvector in the top eigenvalue cluster (eigenvalues within
    1e-9 of the maximum) is reshaped to ``A_ij = sqrt(d) a_ij``. When the
    cluster is degenerate, 64 seeded random unit combinations from its span
    are tried as well, followed by a search for a maximally entangled vector
    inside the span (ascent of the overlap with the cluster projector).
    Returns the first candidate whose ``A`` is unitary to 1e-8, or ``None``.
    A ``None`` result says nothing about the FEF.
    """
    d = rho.d
    w, v = hermitian_eig(rho.mat)
    lam = float(w[-1])
    cluster = v[:, w >= lam - CLUSTER_TOL]
    k = cluster.shape[1]
    for i in range(k):
        cert = _candidate(cluster[:, k - 1 - i], d, lam, f"eigenvector {i} of top cluster")
        if cert.valid:
            return cert
    if k > 1:
        rng = np.random.default_rng(seed)
        for i in range(CLUSTER_RANDOM_TRIES):
            c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
            vec = cluster @ (c / np.linalg.norm(c))
            cert = _candidate(vec, d, lam, f"random combination {i} of top cluster")
            if cert.valid:
                return cert
        proj = cluster @ cluster.conj().T
        for i in range(k):
            start = polar_unitary(cluster[:, i].reshape(d, d).T)
            u = ascend(proj, start, max_iters=200).unitary
            vec = _project_to_span_and_entangled(proj, u.T.reshape(-1) / np.sqrt(d), d)
            if vec is None:
                continue
            cert = _candidate(vec, d, lam, f"maximally entangled vector in top cluster span (start {i})")
            if cert.valid:
                return cert
    return None


def reduced_bound(rho: DensityMatrix) -> float:
    """``(Tr sqrt(rho_A))^2 / d``, tight for pure states and loose for strongly mixed ones."""
    root = psd_sqrt(rho.reduced_a())
    return float(np.trace(root).real ** 2 / rho.d)


def pure_fef(psi: npt.ArrayLike, d: int | None = None) -> float:
    """Exact FEF of a pure state: ``(sum of Schmidt coefficients)^2 / d``.

    Raises
    ------
    NotNormalized
        If ``||psi||`` differs from 1 by more than 1e-9.
    """
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if v.size != d * d:
        raise WrongDimension(f"vector of length {v.size} is not a d x d state for d={d}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > PURE_TOL:
        raise NotNormalized(f"||psi|| = {norm!r}")
    schmidt = np.linalg.svd(v.reshape(d, d), compute_uv=False)
    return float(np.sum(schmidt) ** 2 / d)


def single_fraction(rho: DensityMatrix) -> float:
    """``<psi_+|rho|psi_+>``, the overlap with the canonical maximally entangled state."""
    p = psi_plus(rho.d)
    return float(np.vdot(p, rho.mat @ p).real)


def fidelity_from_fef(F: float, d: int) -> float:
    """Optimal teleportation fidelity ``(d F + 1)/(d + 1)`` achievable with a resource of FEF `F`.

    Examples
    --------
    >>> fidelity_from_fef(1.0, 2)
    1.0
    """
    if int(d) != d or d < 2:
        raise ParamOutOfRange(f"d must be an integer >= 2, got {d!r}")
    if not 0.0 <= F <= 1.0:
        raise ParamOutOfRange(f"F must lie in [0, 1], got {F!r}")
    return (d * F + 1.0) / (d + 1.0)


@dataclass(frozen=True)
class BoundReport:
    d: int
    thm1: float
    correlation: float
    spectral: float
    reduced: float
    single_fraction: float
    best_upper: float
    exact: float | None = None
    certificate: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def report(rho: DensityMatrix) -> BoundReport:
    """Evaluate every bound on one state and, when possible, its exact FEF.

    ``exact`` is set when the spectral bound is certified by
    :func:`exactness_certificate`, or when the state is pure (second
    eigenvalue at most 1e-9), in which case the pure-state formula is used.
    """
    d = rho.d
    thm1 = thm1_bound(rho)
    corr = correlation_bound(rho)
    spec = spectral_bound(rho)
    red = reduced_bound(rho)
    fs = single_fraction(rho)
    best = min(thm1, corr, spec, red)

    exact = certificate = None
    cert = exactness_certificate(rho)
    if cert is not None:
        exact, certificate = cert.lambda_max, cert.describe()
    else:
        w, v = hermitian_eig(rho.mat)
        if w[-2] <= PURE_TOL:
            top = v[:, -1]
            exact = pure_fef(top / np.linalg.norm(top), d)
            certificate = "rank-1 state; exact pure-state value from Schmidt coefficients"

    if best < 1.0 / d**2 - 1e-9:
        raise ConsistencyError(f"best upper bound {best!r} is below the universal minimum 1/d^2")
    if fs > best + 1e-9:
        raise ConsistencyError(f"single fraction {fs!r} exceeds the best upper bound {best!r}")
    return BoundReport(
        d=d,
        thm1=thm1,
        correlation=corr,
        spectral=spec,
        reduced=red,
        single_fraction=fs,
        best_upper=best,
        exact=exact,
        certificate=certificate,
    )
