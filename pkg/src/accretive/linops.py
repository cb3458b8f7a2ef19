"""Dense complex operators: Cartesian split, numerical range, accretivity.

A square complex ndarray stands in for a bounded operator on C^n with the
inner product <x, y> = y^H x.  An operator T is accretive when the Hermitian
real part Re(T) = (T + T*)/2 is positive semidefinite, and omega-accretive
(sectorial) when its numerical range W(T) = {x^H T x : ||x|| = 1} lies in the
closed sector |arg z| <= omega about the positive real axis.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimensionError, PreconditionError
from .tolerances import DEFAULTS

_EPS = float(np.finfo(np.float64).eps)


def as_operator(T):
    """Validate and return T as a square complex128 array.

    Raises DimensionError for non-square shapes or non-finite entries.
    """
    A = np.asarray(T, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A.real)) or not np.all(np.isfinite(A.imag)):
        raise DimensionError("matrix entries must be finite")
    return A


def operator_norm(T):
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(T, 2)) if T.size else 0.0


def hermitian_norm(H):
    """Spectral norm of a Hermitian matrix via the symmetric eigensolver."""
    if H.size == 0:
        return 0.0
    vals = np.linalg.eigvalsh(H)
    return float(max(-vals[0], vals[-1], 0.0))


@dataclass(frozen=True)
class CartesianParts:
    """Hermitian pair with re_part + i*im_part = T."""

    re_part: np.ndarray
    im_part: np.ndarray


def cartesian_parts(T):
    """Cartesian decomposition T = Re(T) + i*Im(T), both parts Hermitian."""
    A = as_operator(T)
    Ah = A.conj().T
    re = (A + Ah) / 2
    im = (A - Ah) / 2j
    return CartesianParts(re_part=re, im_part=im)


def _support_data(T, angles):
    """Support values and maximizing unit vectors of W(T) per direction.

    For each angle the Hermitian rotation Re(e^{-i*theta} T) is diagonalized;
    its top eigenvalue is the support function h(theta) = max Re(e^{-i*theta} z)
    over z in W(T), and the top eigenvector gives the attaining Rayleigh point.
    """
    A = np.asarray(T, dtype=np.complex128)
    rot = np.exp(-1j * angles)[:, None, None] * A[None, :, :]
    herm = (rot + rot.conj().swapaxes(-1, -2)) / 2
    vals, vecs = np.linalg.eigh(herm)
    h = vals[:, -1]
    tops = vecs[:, :, -1]
    points = np.einsum("ki,ij,kj->k", tops.conj(), A, tops)
    return h, points


def support_function(T, angles):
    """h(theta) = lambda_max(Re(e^{-i*theta} T)) for each theta in angles."""
    A = as_operator(T)
    h, _ = _support_data(A, np.asarray(angles, dtype=float))
    return h


def numerical_range_boundary(T, n_angles=720):
    """Boundary samples of the numerical range W(T).

    Returns the Rayleigh points attaining the support function on a uniform
    angle grid.  The points lie in W(T); their convex hull approximates W(T)
    from inside and grows monotonically as n_angles doubles (the angle grids
    nest).
    """
    A = as_operator(T)
    if n_angles < 3:
        raise DimensionError("n_angles must be >= 3")
    angles = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
    _, points = _support_data(A, angles)
    return points


def numerical_radius(T, n_angles=720):
    """Numerical radius w(T) = max |z| over W(T), by the rotation method.

    w(T) = max over theta of lambda_max(Re(e^{-i*theta} T)); a coarse angular
    grid locates the maximizer and a bounded Brent pass refines it (default
    accuracy ~1e-10 relative).
    """
    A = as_operator(T)
    if A.shape[0] == 0:
        return 0.0
    angles = np.linspace(0.0, 2 * np.pi, max(int(n_angles), 8), endpoint=False)
    h, _ = _support_data(A, angles)
    k = int(np.argmax(h))
    best = float(h[k])
    step = 2 * np.pi / len(angles)

    def negated(theta):
        rot = np.exp(-1j * theta) * A
        return -float(np.linalg.eigvalsh((rot + rot.conj().T) / 2)[-1])

    res = minimize_scalar(
        negated,
        bounds=(angles[k] - step, angles[k] + step),
        method="bounded",
        options={"xatol": 1e-9},
    )
    return max(best, float(-res.fun), 0.0)


def support_excess(T, points, n_angles=720):
    """Signed distance of each point to the sampled support planes of W(T).

    For p in the closure of W(T) the value is <= 0 up to rounding; positive
    values lower-bound the distance from W(T).  This is the outer form of the
    hull test: exact for containment claims, no discretization allowance
    needed.
    """
    A = as_operator(T)
    angles = np.linspace(0.0, 2 * np.pi, max(int(n_angles), 8), endpoint=False)
    h, _ = _support_data(A, angles)
    pts = np.asarray(points, dtype=np.complex128).ravel()
    proj = np.real(np.exp(-1j * angles)[None, :] * pts[:, None])
    return np.max(proj - h[None, :], axis=1)


def spectral_inclusion_check(T, n_angles=720, tol=None):
    """Check sigma(T) inside the closure of W(T) via sampled support planes."""
    A = as_operator(T)
    if tol is None:
        tol = DEFAULTS["spectral-inclusion"] * max(1.0, operator_norm(A))
    eigs = np.linalg.eigvals(A)
    return bool(np.all(support_excess(A, eigs, n_angles) <= tol))


@dataclass(frozen=True)
class AccretivityReport:
    """Accretivity / sectoriality certificate for one operator.

    omega is the sectorial semiangle in [0, pi/2]: 0 for positive Hermitian
    inputs, pi/2 when the operator is accretive but the range condition of the
    singular-real-part criterion fails, None when not accretive.  bound_rhs
    carries sqrt(||T||^2/delta^2 - 1) and is only defined on the strongly
    accretive path.
    """

    dim: int
    tolerance: float
    delta: float
    is_accretive: bool
    sectorial: bool
    omega: float | None
    lambda0_modulus: float | None
    bound_rhs: float | None
    numerical_radius: float
    operator_norm: float
    spectral_radius: float
    status: str

    def as_dict(self):
        return {
            "dim": self.dim,
            "tolerance": self.tolerance,
            "delta": self.delta,
            "is_accretive": self.is_accretive,
            "sectorial": self.sectorial,
            "omega": self.omega,
            "lambda0_modulus": self.lambda0_modulus,
            "bound_rhs": self.bound_rhs,
            "numerical_radius": self.numerical_radius,
            "operator_norm": self.operator_norm,
            "spectral_radius": self.spectral_radius,
            "status": self.status,
        }


def _tangent_matrix(re_vals, re_vecs, K, keep):
    """Compressed Re^{-1/2} Im Re^{-1/2} on the span of the kept eigenvectors."""
    Q = re_vecs[:, keep]
    lam = re_vals[keep]
    B = Q.conj().T @ K @ Q
    scale = 1.0 / np.sqrt(lam)
    return scale[:, None] * B * scale[None, :]


def sectorial_angle(T, tol=None):
    """Sectorial semiangle of an accretive operator.

    Returns (omega, delta, sectorial, tan_omega).  omega is None when T is not
    accretive.  On the strongly accretive path tan(omega) is the norm of the
    Hermitian similarity Re^{-1/2} Im Re^{-1/2} of S = Im(T) (Re T)^{-1} (that
    norm equals the spectral radius of S, the quantity the semiangle formula
    omega = arctan|lambda_0| actually uses).  With singular Re(T) the same
    norm is taken on the range block of Re(T), valid exactly when
    range(T) <= range(Re T), which is checked by the rank test
    rank([Re T | T]) = rank(Re T); when that fails the operator is accretive
    but not sectorial and omega = pi/2 is returned flagged.
    """
    A = as_operator(T)
    parts = cartesian_parts(A)
    H, K = parts.re_part, parts.im_part
    n = A.shape[0]
    nrm = operator_norm(A)
    if tol is None:
        tol = DEFAULTS["accretivity"] * max(1.0, nrm)
    re_vals, re_vecs = (np.linalg.eigh(H) if n else (np.zeros(0), np.zeros((0, 0))))
    delta = float(re_vals[0]) if n else 0.0

    if delta < -tol:
        return None, delta, False, None

    if delta > tol:
        tan_omega = hermitian_norm(_tangent_matrix(re_vals, re_vecs, K, slice(None)))
        return math.atan(tan_omega), delta, True, tan_omega

    # Singular (or nearly singular) real part: pseudoinverse path.
    cutoff = max(tol, 2 * n * _EPS * max(nrm, 1e-300))
    aug = np.hstack([H, A]) if n else np.zeros((0, 0))
    rank_h = int(np.count_nonzero(re_vals > cutoff))
    rank_aug = int(np.count_nonzero(np.linalg.svd(aug, compute_uv=False) > cutoff)) if n else 0
    if rank_aug > rank_h:
        return math.pi / 2, delta, False, math.inf
    keep = re_vals > cutoff
    tan_omega = hermitian_norm(_tangent_matrix(re_vals, re_vecs, K, keep))
    return math.atan(tan_omega), delta, True, tan_omega


def accretivity_report(T, tol=None, n_angles=720):
    """Full accretivity certificate: delta, omega, w(T), r(T), ||T||.

    tol defaults to 1e-10 * max(1, ||T||), absolute on lambda_min(Re T).
    Non-accretive input yields is_accretive=False with omega=None (a status,
    not an exception).
    """
    A = as_operator(T)
    n = A.shape[0]
    nrm = operator_norm(A)
    if tol is None:
        tol = DEFAULTS["accretivity"] * max(1.0, nrm)
    omega, delta, sectorial, tan_omega = sectorial_angle(A, tol)
    radius = numerical_radius(A, n_angles)
    spec_r = float(np.max(np.abs(np.linalg.eigvals(A)))) if n else 0.0
    is_acc = delta >= -tol
    if not is_acc:
        status = "not accretive"
        bound = None
    elif delta > tol:
        status = "strongly accretive"
        bound = math.sqrt(max((nrm / delta) ** 2 - 1.0, 0.0))
    elif sectorial:
        status = "accretive, singular real part"
        bound = None
    else:
        status = "accretive, not sectorial (range condition fails)"
        bound = None
    return AccretivityReport(
        dim=n,
        tolerance=float(tol),
        delta=delta,
        is_accretive=is_acc,
        sectorial=sectorial,
        omega=omega,
        lambda0_modulus=tan_omega,
        bound_rhs=bound,
        numerical_radius=radius,
        operator_norm=nrm,
        spectral_radius=spec_r,
        status=status,
    )


def kato_representation(T, tol=None):
    """Tangent operator T_tilde of the representation T = H^{1/2}(I + i*T_tilde)H^{1/2}.

    H = Re(T) must be positive definite; T_tilde = H^{-1/2} Im(T) H^{-1/2} is
    Hermitian with ||T_tilde|| = tan(omega).
    """
    A = as_operator(T)
    parts = cartesian_parts(A)
    nrm = operator_norm(A)
    if tol is None:
        tol = DEFAULTS["accretivity"] * max(1.0, nrm)
    re_vals, re_vecs = np.linalg.eigh(parts.re_part)
    delta = float(re_vals[0]) if A.shape[0] else 0.0
    if delta <= tol:
        raise PreconditionError(
            f"real part not positive definite: lambda_min = {delta:.3e} <= tol = {tol:.3e}"
        )
    M = _tangent_matrix(re_vals, re_vecs, parts.im_part, slice(None))
    return re_vecs @ M @ re_vecs.conj().T


def hermitian_sqrt(H):
    """Principal square root of a positive semidefinite Hermitian matrix."""
    vals, vecs = np.linalg.eigh(np.asarray(H, dtype=np.complex128))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def sector_angle_estimate(T, n_angles=720, rel_floor=1e-9):
    """Largest |arg z| over sampled boundary points of W(T), away from zero.

    A sampling-based fallback for operators that need not be accretive; points
    with |z| below rel_floor * ||T|| are skipped since their argument is
    rounding noise.  Underestimates only, so it is safe in one-sided bounds.
    """
    A = as_operator(T)
    nrm = operator_norm(A)
    if nrm == 0.0:
        return 0.0
    pts = numerical_range_boundary(A, n_angles)
    keep = np.abs(pts) > rel_floor * nrm
    if not np.any(keep):
        return 0.0
    return float(np.max(np.abs(np.angle(pts[keep]))))
