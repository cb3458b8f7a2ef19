"""Moore-Penrose inverses, EP structure, and additive perturbation formulas.

The perturbation results all live on the same geometry: for an EP operator T
(range and row space coincide) and a perturbation S acting within that common
subspace with a contraction certificate ||T_pinv S|| < 1 or ||S T_pinv|| < 1,
the pseudoinverse of T + S is a Neumann-type update of T_pinv and keeps T's
rank, range, and kernel.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import HypothesisError, ParameterError, PreconditionError
from .linops import accretivity_report, as_operator, cartesian_parts, numerical_radius, operator_norm
from .tolerances import DEFAULTS

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class PinvResult:
    """SVD-truncated pseudoinverse with its rank decision made explicit."""

    pinv: np.ndarray
    rank: int
    singular_values: list
    gamma: float
    rank_tol: float


def pseudoinverse(T, rank_tol=None):
    """Moore-Penrose inverse by SVD truncation.

    rank_tol defaults to dim * eps * sigma_max; singular values at or below it
    are treated as zero.  gamma is the smallest retained singular value, the
    reduced minimum modulus 1/||pinv|| (infinite for the zero matrix).
    """
    A = as_operator(T)
    n = A.shape[0]
    if rank_tol is not None and rank_tol <= 0:
        raise ParameterError(f"rank_tol must be positive, got {rank_tol}")
    if n == 0:
        return PinvResult(pinv=A.copy(), rank=0, singular_values=[], gamma=math.inf,
                          rank_tol=float(rank_tol or 0.0))
    U, s, Vh = np.linalg.svd(A)
    if rank_tol is None:
        rank_tol = n * _EPS * float(s[0])
    keep = s > rank_tol
    rank = int(np.count_nonzero(keep))
    gamma = float(s[keep][-1]) if rank else math.inf
    P = (Vh[keep].conj().T / s[keep]) @ U[:, keep].conj().T
    return PinvResult(pinv=P, rank=rank, singular_values=[float(v) for v in s],
                      gamma=gamma, rank_tol=float(rank_tol))


def penrose_residuals(T, P):
    """The four Penrose identity residuals for a claimed pseudoinverse P."""
    A = as_operator(T)
    B = as_operator(P)
    TP, PT = A @ B, B @ A
    return {
        "TPT": operator_norm(TP @ A - A),
        "PTP": operator_norm(PT @ B - B),
        "TP_hermitian": operator_norm(TP - TP.conj().T),
        "PT_hermitian": operator_norm(PT - PT.conj().T),
    }


def range_projector(T, result=None):
    """Orthogonal projector onto range(T)."""
    A = as_operator(T)
    P = (result or pseudoinverse(A)).pinv
    return A @ P


def row_projector(T, result=None):
    """Orthogonal projector onto range(T*) = kernel(T) orthocomplement."""
    A = as_operator(T)
    P = (result or pseudoinverse(A)).pinv
    return P @ A


def subspace_distance(P, Q):
    """Spectral norm of a projector difference: sine of the largest principal
    angle between the two subspaces."""
    return operator_norm(np.asarray(P) - np.asarray(Q))


def is_EP(T, tol=None):
    """True iff the range and row-space projectors coincide to tol.

    EP operators are exactly those commuting with their pseudoinverse; every
    accretive matrix is EP because its kernel and cokernel agree.
    """
    A = as_operator(T)
    if tol is None:
        tol = DEFAULTS["ep"]
    P = pseudoinverse(A).pinv
    return bool(operator_norm(A @ P - P @ A) <= tol)


def accretive_pinv_check(T, tol=None):
    """For accretive T, certify that the pseudoinverse is accretive as well.

    Returns the boolean lambda_min(Re(T_pinv)) >= -tol.  Non-accretive input
    is a precondition error, not a False.
    """
    A = as_operator(T)
    if tol is None:
        tol = DEFAULTS["pinv-accretive"]
    rep = accretivity_report(A)
    if not rep.is_accretive:
        raise PreconditionError(f"input not accretive: delta = {rep.delta:.3e}")
    P = pseudoinverse(A).pinv
    lam = np.linalg.eigvalsh(cartesian_parts(P).re_part)
    dmin = float(lam[0]) if lam.size else 0.0
    return bool(dmin >= -tol * max(1.0, operator_norm(P)))


def unitary_on_range_check(T, tol=None):
    """Accretive T with w(T) <= 1 and w(T_pinv) <= 1 acts unitarily on its range.

    Builds an orthonormal basis Q of range(T) and checks that A = Q* T Q
    satisfies A*A = AA* = I to tol.  Hypothesis failures raise HypothesisError
    with a "hypotheses unmet" message rather than returning False.
    """
    A = as_operator(T)
    if tol is None:
        tol = DEFAULTS["unitary-range"]
    rep = accretivity_report(A)
    if not rep.is_accretive:
        raise HypothesisError(f"hypotheses unmet: not accretive (delta = {rep.delta:.3e})")
    if rep.numerical_radius > 1 + tol:
        raise HypothesisError(f"hypotheses unmet: w(T) = {rep.numerical_radius:.6f} > 1")
    res = pseudoinverse(A)
    w_pinv = numerical_radius(res.pinv)
    if w_pinv > 1 + tol:
        raise HypothesisError(f"hypotheses unmet: w(T_pinv) = {w_pinv:.6f} > 1")
    if res.rank == 0:
        return True
    U, s, _ = np.linalg.svd(A)
    Q = U[:, :res.rank]
    C = Q.conj().T @ A @ Q
    eye = np.eye(res.rank)
    return bool(operator_norm(C.conj().T @ C - eye) <= tol
                and operator_norm(C @ C.conj().T - eye) <= tol)


@dataclass(frozen=True)
class PerturbationCertificate:
    """Checkable hypotheses for the additive pseudoinverse update.

    mode is "range-side" when range(S) sits inside range(T) with
    ||T_pinv S|| < 1, "kernel-side" for the dual pair, "both" when the two
    hypothesis sets hold together, "fail" otherwise.  norm_over_gamma records
    the informational ratio ||S|| / gamma(T); it is not a hypothesis.
    """

    range_inclusion_residual: float
    kernel_inclusion_residual: float
    contraction_TdS: float
    contraction_STd: float
    mode: str
    s_accretive: bool
    theta: float | None
    norm_over_gamma: float

    def as_dict(self):
        return {
            "range_inclusion_residual": self.range_inclusion_residual,
            "kernel_inclusion_residual": self.kernel_inclusion_residual,
            "contraction_TdS": self.contraction_TdS,
            "contraction_STd": self.contraction_STd,
            "mode": self.mode,
            "s_accretive": self.s_accretive,
            "theta": self.theta,
            "norm_over_gamma": self.norm_over_gamma,
        }


def perturbation_certificate(T, S, tol=None):
    """Residuals and contraction norms for the perturbation hypotheses.

    A failed mode is recorded, never raised.  theta is the sectorial angle of
    S when S is accretive (pi/2 when accretive but not sectorial).
    """
    A = as_operator(T)
    B = as_operator(S)
    if A.shape != B.shape:
        raise ParameterError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if tol is None:
        tol = DEFAULTS["inclusion-residual"] * max(1.0, operator_norm(B))
    res = pseudoinverse(A)
    P = res.pinv
    eye = np.eye(A.shape[0])
    r_range = operator_norm((eye - A @ P) @ B)
    r_kernel = operator_norm(B @ (eye - P @ A))
    c_tds = operator_norm(P @ B)
    c_std = operator_norm(B @ P)
    range_ok = r_range <= tol and c_tds < 1
    kernel_ok = r_kernel <= tol and c_std < 1
    if range_ok and kernel_ok:
        mode = "both"
    elif range_ok:
        mode = "range-side"
    elif kernel_ok:
        mode = "kernel-side"
    else:
        mode = "fail"
    s_rep = accretivity_report(B)
    theta = s_rep.omega if s_rep.is_accretive else None
    ratio = operator_norm(B) / res.gamma if math.isfinite(res.gamma) else 0.0
    return PerturbationCertificate(
        range_inclusion_residual=float(r_range),
        kernel_inclusion_residual=float(r_kernel),
        contraction_TdS=float(c_tds),
        contraction_STd=float(c_std),
        mode=mode,
        s_accretive=bool(s_rep.is_accretive),
        theta=theta,
        norm_over_gamma=float(ratio),
    )


def perturbed_pinv(T, S, cert=None, tol=None):
    """Pseudoinverse of T + S by the certified update formula.

    Returns (I + T_pinv S)^{-1} T_pinv.  The dual form
    T_pinv (I + S T_pinv)^{-1} is computed as well and the two are required to
    agree; under a valid certificate both resolvents exist because the two
    products share their nonzero spectrum.
    """
    A = as_operator(T)
    B = as_operator(S)
    if cert is None:
        cert = perturbation_certificate(A, B, tol)
    if cert.mode == "fail":
        raise HypothesisError(
            "perturbation hypotheses unmet: "
            f"range residual {cert.range_inclusion_residual:.3e}, "
            f"kernel residual {cert.kernel_inclusion_residual:.3e}, "
            f"contractions {cert.contraction_TdS:.3f} / {cert.contraction_STd:.3f}"
        )
    P = pseudoinverse(A).pinv
    eye = np.eye(A.shape[0])
    try:
        F_range = np.linalg.solve(eye + P @ B, P)
        F_kernel = np.linalg.solve((eye + B @ P).conj().T, P.conj().T).conj().T
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            "resolvent singular despite contraction certificate; "
            "this contradicts the spectral-radius argument"
        ) from exc
    gap = operator_norm(F_range - F_kernel)
    if gap > 1e-10 * max(1.0, operator_norm(P)):
        raise RuntimeError(f"update formula routes disagree: gap = {gap:.3e}")
    return F_range


def neumann_identity_check(T, S, k):
    """Deviation of the order-k Neumann partial sum from the exact update.

    Returns ||(I + T_pinv S)^{-1} T_pinv - sum_{n<=k} (-T_pinv S)^n T_pinv||,
    which the geometric tail bounds by c^{k+1} ||T_pinv|| / (1 - c) with
    c = ||T_pinv S||.
    """
    A = as_operator(T)
    B = as_operator(S)
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    P = pseudoinverse(A).pinv
    C = P @ B
    c = operator_norm(C)
    if c >= 1:
        raise PreconditionError(f"contraction ||T_pinv S|| = {c:.6f} >= 1")
    eye = np.eye(A.shape[0])
    exact = np.linalg.solve(eye + C, P)
    partial = P.copy()
    for _ in range(int(k)):
        partial = P - C @ partial
    return float(operator_norm(exact - partial))


def square_pinv_identities(T, S, tol=None):
    """Update formula for T^2 + S through the square of T's pseudoinverse.

    For accretive T the identity (T^2)_pinv = (T_pinv)^2 holds exactly (both
    sides compress to the inverse square on the common range block), so the
    perturbation update for T^2 + S can be driven entirely by T_pinv.
    Returns (I + (T_pinv)^2 S)^{-1} (T_pinv)^2.
    """
    A = as_operator(T)
    B = as_operator(S)
    sq = A @ A
    P = pseudoinverse(A).pinv
    P2 = pseudoinverse(sq).pinv
    gap = operator_norm(P2 - P @ P)
    if gap > DEFAULTS["square-pinv"] * max(1.0, operator_norm(P) ** 2):
        raise RuntimeError(
            f"(T^2)_pinv differs from (T_pinv)^2 by {gap:.3e}; "
            "input is outside the accretive EP regime"
        )
    cert = perturbation_certificate(sq, B, tol)
    return perturbed_pinv(sq, B, cert)


def second_power_inequalities(T, samples=64, seed=0):
    """Sampled second-power inequalities relating ||Tx||, ||T^2 x||, gamma.

    Checks, over random unit vectors, the split bound
    ||Tx||^2 <= nu ||x||^2 + (1/nu) ||T^2 x||^2 for nu in {0.5, 1, 2}, the
    product bound ||Tx||^2 <= 2 ||T^2 x|| ||x|| on the orthocomplement of
    kernel(T^2), and the modulus bound gamma(T^2) >= gamma(T)^2 / 2.  Reports
    worst slacks; a negative slack is a violation.
    """
    A = as_operator(T)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    res = pseudoinverse(A)
    sq = A @ A
    res_sq = pseudoinverse(sq)
    proj = res_sq.pinv @ sq
    nson = (0.5, 1.0, 2.0)
    worst_split = {nu: math.inf for nu in nson}
    worst_product = math.inf
    X = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    for x in X:
        tx = float(np.linalg.norm(A @ x) ** 2)
        t2x = float(np.linalg.norm(sq @ x) ** 2)
        for nu in nson:
            worst_split[nu] = min(worst_split[nu], nu + t2x / nu - tx)
        y = proj @ x
        ny = float(np.linalg.norm(y))
        if ny > 1e-12:
            y = y / ny
            worst_product = min(
                worst_product,
                2 * float(np.linalg.norm(sq @ y)) - float(np.linalg.norm(A @ y) ** 2),
            )
    gamma_bound_slack = (
        res_sq.gamma - res.gamma ** 2 / 2
        if math.isfinite(res.gamma) else math.inf
    )
    scale = max(1.0, operator_norm(A) ** 2)
    violations = sum(1 for v in worst_split.values() if v < -DEFAULTS["vector-inequality"] * scale)
    if worst_product < -DEFAULTS["vector-inequality"] * scale:
        violations += 1
    if gamma_bound_slack < -DEFAULTS["second-power-gamma"]:
        violations += 1
    return {
        "samples": int(samples),
        "worst_split_slack": {str(nu): float(v) for nu, v in worst_split.items()},
        "worst_product_slack": float(worst_product),
        "gamma": res.gamma,
        "gamma_sq": res_sq.gamma,
        "gamma_bound_slack": float(gamma_bound_slack),
        "violations": int(violations),
    }
