"""Two-point boundary value problem u'' - 2Tu' - Su = 0 on [0, 1].

With R = (T^2 + S)^{1/2} commuting with T, the factor operators Z1 = T + R
and Z2 = T - R split the equation, and the unique solution through boundary
values u(0) = u0, u(1) = u1 is

    u(t) = exp(-(1-t) Z1) x0 + exp(t Z2) x1,

where x0 and x1 solve the boundary system.  Both exponents have the stable
orientation (decaying for accretive Z1 and the suite's Z2), so the formula is
evaluable without rescaling.
"""

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import AccuracyError, HypothesisError, ParameterError, ResonanceError
from .linops import as_operator, operator_norm
from .pencil import accretive_sqrt
from .tolerances import DEFAULTS


def expm(A):
    """Matrix exponential (scaling-and-squaring); exp(0) = I exactly.

    Non-finite entries in the result (overflow from extreme norms) raise
    AccuracyError with the offending norm in the message.
    """
    M = as_operator(A)
    if M.shape[0] == 0 or not M.any():
        return np.eye(M.shape[0], dtype=complex)
    E = scipy.linalg.expm(M)
    if not np.all(np.isfinite(E)):
        raise AccuracyError(
            f"matrix exponential overflowed (input norm {operator_norm(M):.3e})"
        )
    return np.asarray(E, dtype=complex)


def chebyshev_grid(n=65):
    """n Chebyshev-spaced points on [0, 1], endpoints included."""
    if n < 2:
        raise ParameterError(f"grid needs at least 2 points, got {n}")
    k = np.arange(n)
    return (1 - np.cos(math.pi * k / (n - 1))) / 2


@dataclass(frozen=True)
class BvpProblem:
    """Problem data with the commutation hypothesis measured up front.

    commutation_residual = ||T R - R T|| with R = (T^2 + S)^{1/2}; solving
    requires it to be small since the closed formulas rely on Z1 Z2 = Z2 Z1.
    """

    T: np.ndarray
    S: np.ndarray
    u0: np.ndarray
    u1: np.ndarray
    commutation_residual: float = None

    def __post_init__(self):
        T = as_operator(self.T)
        S = as_operator(self.S)
        if T.shape != S.shape:
            raise ParameterError(f"dimension mismatch: {T.shape} vs {S.shape}")
        u0 = np.asarray(self.u0, dtype=complex).ravel()
        u1 = np.asarray(self.u1, dtype=complex).ravel()
        if u0.shape != (T.shape[0],) or u1.shape != (T.shape[0],):
            raise ParameterError(
                f"boundary vectors must have length {T.shape[0]}, "
                f"got {u0.shape[0]} and {u1.shape[0]}"
            )
        R = accretive_sqrt(T @ T + S)
        resid = operator_norm(T @ R - R @ T)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "sqrt_upsilon", R)
        object.__setattr__(self, "commutation_residual", float(resid))

    @property
    def dim(self):
        return self.T.shape[0]


@dataclass(frozen=True)
class BvpSolution:
    """Solution samples plus the data needed to re-evaluate it anywhere."""

    grid: np.ndarray
    values: np.ndarray
    x0: np.ndarray
    x1: np.ndarray
    boundary_residual: float
    ode_residual: float
    oracle_gap: float | None = None
    z1: np.ndarray | None = None
    z2: np.ndarray | None = None


def _evaluate(z1, z2, x0, x1, ts):
    """u(t) = exp(-(1-t) Z1) x0 + exp(t Z2) x1 for each t."""
    out = np.empty((len(ts), len(x0)), dtype=complex)
    for i, t in enumerate(np.asarray(ts, dtype=float)):
        out[i] = expm(-(1 - t) * z1) @ x0 + expm(t * z2) @ x1
    return out


def _residual_scale(T, S, x0, x1):
    return (1 + 2 * operator_norm(T) + operator_norm(S)) * (
        1 + float(np.linalg.norm(x0)) + float(np.linalg.norm(x1))
    )


def solve_bvp(p, grid=None, tol=None):
    """Boundary-fitted exponential solution of u'' - 2Tu' - Su = 0.

    x0 and x1 are taken from the closed formulas through (I - e^{-2R})^{-1}
    and re-derived from the 2x2 block boundary system; the two routes must
    agree, which pins the sign conventions independently of either
    derivation.  Near-singular I - e^{-2R} is a resonance (non-uniqueness of
    the two-point problem) and raises ResonanceError.
    """
    if tol is None:
        tol = DEFAULTS["bvp-commutation"] * max(1.0, operator_norm(p.T) ** 2,
                                                operator_norm(p.S))
    if p.commutation_residual > tol:
        raise HypothesisError(
            f"T does not commute with the pencil root: residual "
            f"{p.commutation_residual:.3e} > tol {tol:.3e}"
        )
    R = p.sqrt_upsilon
    z1 = p.T + R
    z2 = p.T - R
    n = p.dim
    eye = np.eye(n)
    M = eye - expm(-2 * R)
    smin = np.linalg.svd(M, compute_uv=False)[-1] if n else 1.0
    if smin <= DEFAULTS["resonance"] * max(1, n):
        raise ResonanceError(
            f"I - exp(-2 R) is singular to working precision "
            f"(sigma_min = {smin:.3e}); the two-point problem is resonant"
        )
    e_z2 = expm(z2)
    e_mz1 = expm(-z1)
    x0 = np.linalg.solve(M, -e_z2 @ p.u0 + p.u1)
    x1 = np.linalg.solve(M, p.u0 - e_mz1 @ p.u1)
    # Independent route: the raw boundary system, no inverse-of-M shortcut.
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, :n] = e_mz1
    block[:n, n:] = eye
    block[n:, :n] = eye
    block[n:, n:] = e_z2
    stacked = np.linalg.solve(block, np.concatenate([p.u0, p.u1]))
    route_gap = float(np.linalg.norm(np.concatenate([x0, x1]) - stacked))
    if route_gap > DEFAULTS["dual-route"] * (1 + np.linalg.norm(stacked)):
        raise RuntimeError(
            f"boundary-coefficient routes disagree by {route_gap:.3e}; "
            "sign conventions violated"
        )
    ts = chebyshev_grid() if grid is None else np.asarray(grid, dtype=float)
    if ts.ndim != 1 or len(ts) < 2 or np.any(np.diff(ts) <= 0) or ts[0] < 0 or ts[-1] > 1:
        raise ParameterError("grid must be strictly increasing within [0, 1]")
    values = _evaluate(z1, z2, x0, x1, ts)
    b0 = e_mz1 @ x0 + x1 - p.u0
    b1 = x0 + e_z2 @ x1 - p.u1
    boundary_residual = max(float(np.linalg.norm(b0)), float(np.linalg.norm(b1)))
    check = ts[(ts > 0) & (ts < 1)][:16] if len(ts) > 2 else ts
    resid = _ode_residual_analytic(z1, z2, x0, x1, p, check)
    return BvpSolution(
        grid=ts, values=values, x0=x0, x1=x1,
        boundary_residual=boundary_residual, ode_residual=resid,
        z1=z1, z2=z2,
    )


def _ode_residual_analytic(z1, z2, x0, x1, p, check_points):
    """Max normalized ||u'' - 2Tu' - Su|| using analytic derivatives.

    With x(t) = e^{-(1-t)Z1} x0 and y(t) = e^{tZ2} x1 the derivatives are
    u' = Z1 x + Z2 y and u'' = Z1^2 x + Z2^2 y, so the defect reduces to the
    commutator [T, R] applied to x - y and vanishes in the commuting case.
    """
    scale = _residual_scale(p.T, p.S, x0, x1)
    worst = 0.0
    for t in np.asarray(check_points, dtype=float):
        x = expm(-(1 - t) * z1) @ x0
        y = expm(t * z2) @ x1
        u = x + y
        du = z1 @ x + z2 @ y
        ddu = z1 @ (z1 @ x) + z2 @ (z2 @ y)
        defect = ddu - 2 * (p.T @ du) - p.S @ u
        worst = max(worst, float(np.linalg.norm(defect)) / scale)
    return worst


def ode_residual(sol, p, check_points=None):
    """Normalized ODE defect at the check points, derivative cross-checked.

    The analytic derivative u' = Z1 x + Z2 y is compared against central
    finite differences with step 1e-4; disagreement beyond the derivative
    tolerance means the stored solution data is inconsistent and raises
    AccuracyError.
    """
    if sol.z1 is None or sol.z2 is None:
        raise ParameterError("solution carries no factor data; cannot evaluate")
    if check_points is None:
        check_points = np.linspace(0.05, 0.95, 7)
    check_points = np.asarray(check_points, dtype=float)
    h = 1e-4
    scale = _residual_scale(p.T, p.S, sol.x0, sol.x1)
    for t in check_points[(check_points > h) & (check_points < 1 - h)][:5]:
        x = expm(-(1 - t) * sol.z1) @ sol.x0
        y = expm(t * sol.z2) @ sol.x1
        du = sol.z1 @ x + sol.z2 @ y
        u_plus = _evaluate(sol.z1, sol.z2, sol.x0, sol.x1, [t + h])[0]
        u_minus = _evaluate(sol.z1, sol.z2, sol.x0, sol.x1, [t - h])[0]
        fd = (u_plus - u_minus) / (2 * h)
        if np.linalg.norm(du - fd) > DEFAULTS["derivative-check"] * scale:
            raise AccuracyError(
                f"analytic derivative disagrees with finite differences at t={t:.3f} "
                f"by {np.linalg.norm(du - fd):.3e}"
            )
    return _ode_residual_analytic(sol.z1, sol.z2, sol.x0, sol.x1, p, check_points)


def fd_oracle(p, n_points, solution=None):
    """Second-order central-difference discretization, solved as one system.

    Interior nodes t_i = i h with h = 1/n_points; row i couples
    (I/h^2 + T/h) u_{i-1} + (-2I/h^2 - S) u_i + (I/h^2 - T/h) u_{i+1} = 0
    with boundary values moved to the right-hand side.  oracle_gap is the max
    grid distance to the exponential-formula solution (O(h^2)).
    """
    if n_points < 16:
        raise ParameterError(f"n_points must be >= 16, got {n_points}")
    n = p.dim
    m = n_points - 1
    h = 1.0 / n_points
    eye = scipy.sparse.identity(n, dtype=complex, format="csr")
    T = scipy.sparse.csr_matrix(p.T)
    S = scipy.sparse.csr_matrix(p.S)
    lower = eye / h**2 + T / h
    diag = -2 * eye / h**2 - S
    upper = eye / h**2 - T / h
    I_m = scipy.sparse.identity(m, format="csr")
    shift_down = scipy.sparse.diags([np.ones(m - 1)], [-1], format="csr")
    shift_up = scipy.sparse.diags([np.ones(m - 1)], [1], format="csr")
    A = (scipy.sparse.kron(I_m, diag) + scipy.sparse.kron(shift_down, lower)
         + scipy.sparse.kron(shift_up, upper)).tocsc()
    rhs = np.zeros(m * n, dtype=complex)
    rhs[:n] = -(lower @ p.u0)
    rhs[-n:] = -(upper @ p.u1)
    try:
        flat = scipy.sparse.linalg.spsolve(A, rhs)
    except Exception as exc:
        raise ResonanceError(f"discrete boundary system unsolvable: {exc}") from exc
    if not np.all(np.isfinite(flat)):
        raise ResonanceError("discrete boundary system is singular (non-finite solve)")
    interior = flat.reshape(m, n)
    grid = np.linspace(0.0, 1.0, n_points + 1)
    values = np.vstack([p.u0[None, :], interior, p.u1[None, :]])
    discrete_residual = float(np.linalg.norm(A @ flat - rhs)) / (1 + float(np.linalg.norm(rhs)))
    gap = None
    if solution is None:
        solution = solve_bvp(p, grid=grid)
        exact = solution.values
    else:
        exact = _evaluate(solution.z1, solution.z2, solution.x0, solution.x1, grid)
    gap = float(np.max(np.linalg.norm(values - exact, axis=1)))
    return BvpSolution(
        grid=grid, values=values,
        x0=np.zeros(n, dtype=complex), x1=np.zeros(n, dtype=complex),
        boundary_residual=0.0, ode_residual=discrete_residual, oracle_gap=gap,
    )
