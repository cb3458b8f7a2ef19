"""Quadratic pencil Q(lambda) = lambda^2 I - 2 lambda T - S and its factors.

With Upsilon = T^2 + S accretive, the principal square root R = Upsilon^{1/2}
yields factor operators Z1 = T + R and Z2 = T - R.  The pencil then splits as
the symmetrized product of (lambda - Z1) and (lambda - Z2), one-sidedly so
when T and S commute.
"""

from dataclasses import dataclass, field
import math

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import AccuracyError, ParameterError, PreconditionError
from .linops import (
    accretivity_report,
    as_operator,
    cartesian_parts,
    operator_norm,
    sector_angle_estimate,
)
from .tolerances import DEFAULTS

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class QuadraticPencil:
    """Monic quadratic pencil data; hypotheses are certified later, not here."""

    T: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        T = as_operator(self.T)
        S = as_operator(self.S)
        if T.shape != S.shape:
            raise ParameterError(f"dimension mismatch: {T.shape} vs {S.shape}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "S", S)

    @property
    def dim(self):
        return self.T.shape[0]


def _delta(A):
    """lambda_min of the Hermitian real part."""
    if A.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(cartesian_parts(A).re_part)[0])


def build_upsilon(T, S):
    """Upsilon = T^2 + S.

    When T^2 and S are individually accretive the sum must be as well
    (numerical ranges add); that consequence is checked here and a violation
    is an internal error, not a data condition.
    """
    A = as_operator(T)
    B = as_operator(S)
    if A.shape != B.shape:
        raise ParameterError(f"dimension mismatch: {A.shape} vs {B.shape}")
    U = A @ A + B
    tol = DEFAULTS["accretivity"] * max(1.0, operator_norm(A) ** 2, operator_norm(B))
    if _delta(A @ A) >= -tol and _delta(B) >= -tol and _delta(U) < -2 * tol:
        raise RuntimeError(
            f"accretive parts produced non-accretive sum (delta = {_delta(U):.3e})"
        )
    return U


def _range_block(U, cutoff_scale=None):
    """Orthonormal range basis Q and the compression Q* U Q for EP input.

    Returns (Q, block); for full-rank input Q is None and block is U itself.
    Raises PreconditionError when the range fails to reduce U (non-EP), since
    kernel-preserving roots and powers are undefined then.
    """
    n = U.shape[0]
    svals = np.linalg.svd(U, compute_uv=False)
    cutoff = n * _EPS * (float(svals[0]) if n else 0.0) * 100
    rank = int(np.count_nonzero(svals > cutoff))
    if rank == n:
        return None, U
    Uv, _, _ = np.linalg.svd(U)
    Q = Uv[:, :rank]
    block = Q.conj().T @ U @ Q
    recon = Q @ block @ Q.conj().T
    if operator_norm(recon - U) > max(cutoff, 1e-12 * max(1.0, float(svals[0]) if n else 0.0)):
        raise PreconditionError(
            "singular input is not reduced by its range (not EP); "
            "kernel-preserving functional calculus undefined"
        )
    return Q, block


def accretive_sqrt(U, tol=None):
    """Principal square root with the kernel annihilated explicitly.

    Full-rank input goes straight to the Schur method.  Singular EP input is
    compressed to its range block, rooted there, and reassembled, so
    kernel(result) = kernel(U) exactly.  An eigenvalue on the closed negative
    real axis (impossible for accretive U outside zero) means no principal
    root exists.
    """
    A = as_operator(U)
    n = A.shape[0]
    if n == 0:
        return A.copy()
    if tol is None:
        tol = DEFAULTS["accretivity"] * max(1.0, operator_norm(A))
    Q, block = _range_block(A)
    eigs = np.linalg.eigvals(block)
    bad = (eigs.real < 0) & (np.abs(eigs.imag) <= tol * np.maximum(1.0, np.abs(eigs.real)))
    if np.any(bad):
        raise PreconditionError(
            f"no principal square root: eigenvalue {eigs[bad][0]:.6g} on the negative real axis"
        )
    W = scipy.linalg.sqrtm(block)
    W = np.asarray(W, dtype=np.complex128)
    if Q is not None:
        W = Q @ W @ Q.conj().T
    residual = operator_norm(W @ W - A)
    if residual > DEFAULTS["sqrt-residual"] * max(1.0, operator_norm(A)):
        raise AccuracyError(f"square-root residual {residual:.3e} above tolerance")
    return W


def _quad_defaults(quad):
    spec = {
        "target": DEFAULTS["quadrature-rel"],
        "tail": 1e-12,
        "nodes_per_panel": 12,
        "panel_width": 2.0,
        "max_doublings": 8,
    }
    if quad:
        unknown = set(quad) - set(spec)
        if unknown:
            raise ParameterError(f"unknown quadrature keys: {sorted(unknown)}")
        spec.update(quad)
    return spec


def _balakrishnan_dense(A, alpha, spec):
    """Exponential-substitution Gauss-Legendre quadrature on invertible input.

    After lambda = e^u the representation reads
    T^alpha = (sin(pi alpha)/pi) * integral of e^{alpha u} T (e^u + T)^{-1} du
    over the whole line.  Accretivity gives ||(e^u + T)^{-1}|| <= e^{-u}, so
    the integrand norm decays like e^{alpha u} to the left and like
    ||T|| e^{(alpha-1)u} to the right; the truncation points push both tails
    below spec["tail"] * max(1, ||T||^alpha).
    """
    n = A.shape[0]
    nrm = operator_norm(A)
    sin_pa = math.sin(math.pi * alpha)
    tail_target = spec["tail"] * max(1.0, nrm ** alpha)
    u_lo = math.log(math.pi * alpha * tail_target / (2 * sin_pa)) / alpha
    u_hi = math.log(math.pi * (1 - alpha) * tail_target / (sin_pa * max(nrm, 1e-300))) / (alpha - 1)
    if u_hi <= u_lo:
        u_hi = u_lo + 1.0
    nodes, weights = np.polynomial.legendre.leggauss(int(spec["nodes_per_panel"]))

    def integrate(panels):
        edges = np.linspace(u_lo, u_hi, panels + 1)
        mid = (edges[:-1] + edges[1:]) / 2
        half = (edges[1:] - edges[:-1]) / 2
        u = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        lam = np.exp(u)
        systems = lam[:, None, None] * np.eye(n)[None, :, :] + A[None, :, :]
        rhs = np.broadcast_to(A, (len(u), n, n))
        X = np.linalg.solve(systems, rhs)
        coeff = (sin_pa / math.pi) * w * np.exp(alpha * u)
        return np.tensordot(coeff, X, axes=(0, 0))

    panels = max(4, int(math.ceil((u_hi - u_lo) / spec["panel_width"])))
    prev = integrate(panels)
    diff = math.inf
    for _ in range(int(spec["max_doublings"])):
        panels *= 2
        curr = integrate(panels)
        diff = operator_norm(curr - prev) / max(operator_norm(curr), 1e-300)
        if diff < spec["target"]:
            return curr
        prev = curr
    raise AccuracyError(
        f"quadrature did not converge: achieved relative difference {diff:.3e}, "
        f"target {spec['target']:.1e}"
    )


def balakrishnan_power(T, alpha, quad=None):
    """Fractional power T^alpha, 0 < alpha < 1, by Balakrishnan quadrature.

    Accretive input required.  Singular accretive (EP) input is compressed to
    its range block first so the kernel passes through unchanged.
    """
    A = as_operator(T)
    if not (0 < alpha < 1):
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    spec = _quad_defaults(quad)
    n = A.shape[0]
    if n == 0:
        return A.copy()
    tol = DEFAULTS["accretivity"] * max(1.0, operator_norm(A))
    if _delta(A) < -tol:
        raise PreconditionError(f"input not accretive: delta = {_delta(A):.3e}")
    if operator_norm(A) <= tol:
        return np.zeros_like(A)
    Q, block = _range_block(A)
    result = _balakrishnan_dense(block, float(alpha), spec)
    if Q is not None:
        result = Q @ result @ Q.conj().T
    return result


@dataclass(frozen=True)
class PencilFactorization:
    """Factor data for Q(lambda) with residuals and spectral layout.

    separation_regime is "strong" when Re(Upsilon) is strictly positive (the
    disjoint-spectra claim applies) and "degenerate" otherwise (Z1 and Z2
    share kernel eigenvalues).  z1_sector_angle is measured and reported, not
    asserted against any fixed sector.
    """

    upsilon: np.ndarray
    sqrt_upsilon: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    sqrt_residual: float
    sqrt_sector_angle: float
    commuting: bool
    spectra_z1: list
    spectra_z2: list
    separation: float
    z1_sector_angle: float
    separation_regime: str
    warnings: list = field(default_factory=list)


def factorize(p, tol=None):
    """Factor operators Z1 = T + Upsilon^{1/2}, Z2 = T - Upsilon^{1/2}.

    Hypothesis shortfalls (T, T^2, or S not accretive) are recorded as
    warnings on the result rather than raised; square-root failures
    propagate.
    """
    T, S = p.T, p.S
    scale = max(1.0, operator_norm(T) ** 2, operator_norm(S))
    if tol is None:
        tol = DEFAULTS["accretivity"] * scale
    warnings = []
    for name, M in (("T", T), ("T^2", T @ T), ("S", S)):
        d = _delta(M)
        if d < -tol:
            warnings.append(f"{name} not accretive (delta = {d:.3e})")
    U = T @ T + S
    R = accretive_sqrt(U)
    z1 = T + R
    z2 = T - R
    sqrt_residual = operator_norm(R @ R - U)
    rep_R = accretivity_report(R)
    if rep_R.is_accretive and rep_R.omega is not None:
        sqrt_angle = rep_R.omega
    else:
        sqrt_angle = sector_angle_estimate(R)
    rep_z1 = accretivity_report(z1)
    if rep_z1.is_accretive and rep_z1.omega is not None:
        z1_angle = rep_z1.omega
    else:
        z1_angle = sector_angle_estimate(z1)
    comm = operator_norm(T @ S - S @ T)
    commuting = bool(comm <= DEFAULTS["commutation"] * max(1.0, operator_norm(T) * operator_norm(S)))
    s1 = np.linalg.eigvals(z1)
    s2 = np.linalg.eigvals(z2)
    separation = float(np.min(np.abs(s1[:, None] - s2[None, :]))) if s1.size else math.inf
    regime = "strong" if _delta(U) > DEFAULTS["separation-strong"] else "degenerate"
    if regime == "degenerate":
        warnings.append("Re(Upsilon) not strictly positive; disjoint-spectra claim not applicable")
    return PencilFactorization(
        upsilon=U,
        sqrt_upsilon=R,
        z1=z1,
        z2=z2,
        sqrt_residual=float(sqrt_residual),
        sqrt_sector_angle=float(sqrt_angle),
        commuting=commuting,
        spectra_z1=[complex(v) for v in s1],
        spectra_z2=[complex(v) for v in s2],
        separation=separation,
        z1_sector_angle=float(z1_angle),
        separation_regime=regime,
        warnings=warnings,
    )


def eval_pencil(p, lam):
    """Q(lambda) = lambda^2 I - 2 lambda T - S."""
    lam = complex(lam)
    return lam * lam * np.eye(p.dim) - 2 * lam * p.T - p.S


def factorization_residuals(f, p, lambdas):
    """Worst normalized factorization residuals over the given lambdas.

    Returns (symmetric, one_sided): the symmetric value compares Q(lambda)
    with the half-sum of the two orderings of (lambda - Z1)(lambda - Z2) and
    is an algebraic identity, commuting or not; the one-sided value compares
    against the single ordering and is only meaningful when f.commuting.
    Each residual is normalized by (1 + |lambda|^2) so a tolerance can be
    stated uniformly over sweeps.
    """
    worst_sym = 0.0
    worst_one = 0.0
    eye = np.eye(p.dim)
    for lam in np.asarray(lambdas, dtype=complex).ravel():
        Qlam = eval_pencil(p, lam)
        A1 = lam * eye - f.z1
        A2 = lam * eye - f.z2
        sym = operator_norm(Qlam - 0.5 * (A1 @ A2 + A2 @ A1))
        one = operator_norm(Qlam - A1 @ A2)
        norm = 1.0 + abs(lam) ** 2
        worst_sym = max(worst_sym, sym / norm)
        worst_one = max(worst_one, one / norm)
    return worst_sym, worst_one


def pencil_spectrum(p):
    """All 2*dim pencil eigenvalues via the companion linearization.

    lambda^2 x = 2 lambda T x + S x rewrites as the block eigenproblem
    [[0, I], [S, 2T]] (x, lambda x) = lambda (x, lambda x).
    """
    n = p.dim
    C = np.zeros((2 * n, 2 * n), dtype=complex)
    C[:n, n:] = np.eye(n)
    C[n:, :n] = p.S
    C[n:, n:] = 2 * p.T
    return [complex(v) for v in np.linalg.eigvals(C)]


def multiset_match_distance(a, b):
    """Largest pairwise distance under the optimal matching of two multisets."""
    x = np.asarray(a, dtype=complex).ravel()
    y = np.asarray(b, dtype=complex).ravel()
    if x.size != y.size:
        raise ParameterError(f"multiset sizes differ: {x.size} vs {y.size}")
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def vandermonde_check(f):
    """Invertibility of [[I, I], [Z1, Z2]] must track invertibility of the root.

    Row reduction gives det V = det(Z2 - Z1) = det(-2 Upsilon^{1/2}), so the
    two rank decisions agree exactly; this check confirms it numerically.
    """
    n = f.z1.shape[0]
    V = np.zeros((2 * n, 2 * n), dtype=complex)
    V[:n, :n] = np.eye(n)
    V[:n, n:] = np.eye(n)
    V[n:, :n] = f.z1
    V[n:, n:] = f.z2
    sv_V = np.linalg.svd(V, compute_uv=False)
    sv_R = np.linalg.svd(f.sqrt_upsilon, compute_uv=False)
    v_invertible = bool(sv_V[-1] > 2 * n * _EPS * sv_V[0] * 100)
    r_invertible = bool(n == 0 or sv_R[-1] > n * _EPS * max(sv_R[0], 1.0) * 100)
    return v_invertible == r_invertible


def relative_bound_check(p, samples=64, seed=0):
    """Concrete T^2-relative bound constants for the factor operators.

    Searches a log grid of split parameters (rho1, rho2) for
    nu2 = 2 (1/rho1 + 1/rho2) < 1 with nu1 = 2 (rho1 + rho2 + 2 ||S||)
    minimized, then verifies ||Z_i x||^2 <= nu1 ||x||^2 + nu2 ||T^2 x||^2 on
    sampled unit vectors.  Violations are counted, not raised.
    """
    f = factorize(p)
    s_norm = operator_norm(p.S)
    best = None
    for rho1 in np.logspace(0.5, 3, 24):
        for rho2 in np.logspace(0.5, 3, 24):
            nu2 = 2 * (1 / rho1 + 1 / rho2)
            if nu2 >= 0.95:
                continue
            nu1 = 2 * (rho1 + rho2 + 2 * s_norm)
            if best is None or nu1 < best[0]:
                best = (nu1, nu2, float(rho1), float(rho2))
    nu1, nu2, rho1, rho2 = best
    rng = np.random.default_rng(seed)
    n = p.dim
    sq = p.T @ p.T
    X = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    worst = math.inf
    violations = 0
    tol = DEFAULTS["vector-inequality"] * max(1.0, nu1 + nu2 * operator_norm(sq) ** 2)
    for x in X:
        t2 = float(np.linalg.norm(sq @ x) ** 2)
        for Z in (f.z1, f.z2):
            slack = nu1 + nu2 * t2 - float(np.linalg.norm(Z @ x) ** 2)
            worst = min(worst, slack)
            if slack < -tol:
                violations += 1
    return {
        "nu1": float(nu1),
        "nu2": float(nu2),
        "rho1": rho1,
        "rho2": rho2,
        "samples": int(samples),
        "worst_slack": float(worst),
        "violations": int(violations),
    }
