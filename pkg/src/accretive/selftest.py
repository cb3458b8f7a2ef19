"""Seeded property suites behind the selftest command.

Each suite draws from its own named stream (rng_for(seed, label)), so the
claim list and every measured value are a deterministic function of the
seed and the tolerance table, independent of suite execution order.  The
volatile parts of a report (wall-clock header, per-claim runtimes) live
outside the body; the body is the unit that determinism claims compare.
"""

from __future__ import annotations

import json
import math
import time

import numpy as np

from . import __version__
from .bvp import BvpProblem, fd_oracle, solve_bvp
from .errors import ModelError
from .linops import (
    cartesian_parts,
    hermitian_sqrt,
    kato_representation,
    numerical_radius,
    numerical_range_boundary,
    operator_norm,
    sectorial_angle,
    support_excess,
)
from .pencil import (
    QuadraticPencil,
    balakrishnan_power,
    factorization_residuals,
    factorize,
    multiset_match_distance,
    pencil_spectrum,
    vandermonde_check,
)
from .pinv import (
    neumann_identity_check,
    penrose_residuals,
    perturbation_certificate,
    perturbed_pinv,
    pseudoinverse,
    range_projector,
    row_projector,
    second_power_inequalities,
    subspace_distance,
)
from .sampling import (
    accretive_operator,
    commuting_pencil_pair,
    complex_gaussian,
    pencil_pair,
    perturbation_for,
    random_operator,
    random_unitary,
    rank_deficient_operator,
    rng_for,
    singular_accretive_operator,
)
from .spectral import LaplacianModel, demo
from .tolerances import resolve

FORMAT_VERSION = 1


def _certified_pair(rng, dim, rank, contraction=0.6):
    # S = Q B Q* inside T's common range/row block with accretive B, scaled
    # to the requested contraction level; both inclusion hypotheses hold.
    Q = random_unitary(rng, dim)[:, :rank]
    M = accretive_operator(rng, rank)
    B = accretive_operator(rng, rank, max_tan=1.5)
    T = Q @ M @ Q.conj().T
    P = pseudoinverse(T).pinv
    S = Q @ B @ Q.conj().T
    S *= contraction * rng.random() / np.linalg.norm(P @ S, 2)
    return T, S


def _suite_pinv_basics(rng, tols):
    worst_pen = 0.0
    worst_inv = 0.0
    for k in range(40):
        dim = int(rng.integers(1, 13))
        if k % 2:
            T = rank_deficient_operator(rng, dim, int(rng.integers(0, dim + 1)))
        else:
            T = random_operator(rng, dim)
        res = pseudoinverse(T)
        scale = max(1.0, operator_norm(T), operator_norm(res.pinv))
        worst_pen = max(worst_pen, max(penrose_residuals(T, res.pinv).values()) / scale)
        back = pseudoinverse(res.pinv).pinv
        worst_inv = max(worst_inv, operator_norm(back - T) / max(1.0, operator_norm(T)))
    return [
        ("pinv-penrose", worst_pen, tols["penrose"]),
        ("pinv-involution", worst_inv, tols["involution"]),
    ]


def _suite_pinv_accretive(rng, tols):
    worst_ep = 0.0
    worst_neg = 0.0
    for _ in range(30):
        dim = int(rng.integers(1, 13))
        rank = int(rng.integers(1, dim + 1))
        T = singular_accretive_operator(rng, dim, rank)
        res = pseudoinverse(T)
        worst_ep = max(worst_ep, operator_norm(T @ res.pinv - res.pinv @ T))
        lam = float(np.min(np.linalg.eigvalsh(0.5 * (res.pinv + res.pinv.conj().T))))
        worst_neg = max(worst_neg, max(0.0, -lam))
    return [
        ("pinv-ep-accretive", worst_ep, tols["ep"]),
        ("pinv-accretive-real-part", worst_neg, tols["pinv-accretive"]),
    ]


def _suite_numerical_range(rng, tols):
    worst_chain = 0.0
    worst_hull = 0.0
    worst_spec = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 11))
        T = random_operator(rng, dim)
        nrm = operator_norm(T)
        scale = max(1.0, nrm)
        w = numerical_radius(T)
        r = float(np.max(np.abs(np.linalg.eigvals(T))))
        worst_chain = max(worst_chain, (r - w) / scale, (w - nrm) / scale, (nrm - 2 * w) / scale)
        pts = numerical_range_boundary(T, n_angles=180)
        worst_hull = max(worst_hull, float(np.max(support_excess(T, pts))) / scale)
        eigs = np.linalg.eigvals(T)
        worst_spec = max(worst_spec, float(np.max(support_excess(T, eigs))) / scale)
    return [
        ("norm-chain", worst_chain, tols["norm-chain"]),
        ("hull-consistency", worst_hull, tols["hull-distance"]),
        ("spectral-inclusion", worst_spec, tols["spectral-inclusion"]),
    ]


def _suite_sectorial(rng, tols):
    worst_bound = 0.0
    for _ in range(40):
        dim = int(rng.integers(1, 13))
        T = accretive_operator(rng, dim)
        omega, delta, _, tan_om = sectorial_angle(T)
        rhs = math.sqrt(max((operator_norm(T) / delta) ** 2 - 1.0, 0.0))
        worst_bound = max(worst_bound, tan_om - rhs)
    witness_omega = sectorial_angle(np.array([[1.0, 1.0], [-1.0, 1.0]]))[0]
    worst_kato = 0.0
    for _ in range(15):
        dim = int(rng.integers(1, 10))
        T = accretive_operator(rng, dim, max_tan=1.2)
        K = kato_representation(T)
        R = hermitian_sqrt(cartesian_parts(T).re_part)
        rebuilt = R @ (np.eye(dim) + 1j * K) @ R
        worst_kato = max(worst_kato, operator_norm(rebuilt - T) / max(1.0, operator_norm(T)))
    return [
        ("sectorial-angle-bound", worst_bound, tols["sectorial-bound"]),
        ("sectorial-witness", abs(witness_omega - math.pi / 4), tols["sectorial-witness"]),
        ("kato-round-trip", worst_kato, tols["kato-reconstruction"]),
    ]


def _suite_perturbation(rng, tols):
    worst_formula = 0.0
    worst_geom = 0.0
    worst_err = 0.0
    worst_theta = 0.0
    for _ in range(30):
        dim = int(rng.integers(2, 11))
        rank = int(rng.integers(1, dim + 1))
        T, S = _certified_pair(rng, dim, rank)
        cert = perturbation_certificate(T, S)
        res = pseudoinverse(T)
        pn = operator_norm(res.pinv)
        updated = perturbed_pinv(T, S, cert)
        direct = pseudoinverse(T + S)
        worst_formula = max(
            worst_formula, operator_norm(updated - direct.pinv) / max(pn, 1e-300)
        )
        if direct.rank != res.rank:
            worst_geom = max(worst_geom, 1.0)
        worst_geom = max(
            worst_geom,
            subspace_distance(range_projector(T, res), range_projector(T + S, direct)),
            subspace_distance(row_projector(T, res), row_projector(T + S, direct)),
        )
        diff = operator_norm(direct.pinv - res.pinv)
        bound = operator_norm(S) * pn**2 / (1 - cert.contraction_TdS)
        worst_err = max(worst_err, (diff - bound) / max(1.0, bound))
        if cert.s_accretive and cert.theta is not None and cert.theta < math.pi / 2:
            norm_bound = 2 * pn + (1 + math.tan(cert.theta)) ** 2 * pn**2
            worst_theta = max(
                worst_theta, (operator_norm(direct.pinv) - norm_bound) / max(1.0, norm_bound)
            )
    worst_scaling = 0.0
    for _ in range(8):
        dim = int(rng.integers(2, 9))
        T = singular_accretive_operator(rng, dim, int(rng.integers(1, dim + 1)))
        res = pseudoinverse(T)
        S = 0.25 * T
        updated = perturbed_pinv(T, S)
        worst_scaling = max(
            worst_scaling,
            operator_norm(updated - res.pinv / 1.25) / max(1.0, operator_norm(res.pinv)),
        )
    return [
        ("perturb-formula", worst_formula, tols["perturb-formula-rel"]),
        ("perturb-geometry", worst_geom, tols["subspace-angle"]),
        ("perturb-error-bound", max(0.0, worst_err), tols["bound-slack"]),
        ("perturb-theta-bound", max(0.0, worst_theta), tols["bound-slack"]),
        ("perturb-scaling", worst_scaling, tols["perturb-scaling"]),
    ]


def _suite_neumann(rng, tols):
    T, S = _certified_pair(rng, 6, 4, contraction=0.4)
    deviation = neumann_identity_check(T, S, 20)
    return [("neumann-tail", deviation, tols["neumann-tail"])]


def _suite_second_power(rng, tols):
    worst_sq = 0.0
    for _ in range(15):
        dim = int(rng.integers(1, 11))
        rank = int(rng.integers(1, dim + 1))
        T = singular_accretive_operator(rng, dim, rank)
        P = pseudoinverse(T).pinv
        P2 = pseudoinverse(T @ T).pinv
        worst_sq = max(
            worst_sq, operator_norm(P2 - P @ P) / max(1.0, operator_norm(P) ** 2)
        )
    worst_vec = 0.0
    worst_gamma = 0.0
    for k in range(10):
        dim = int(rng.integers(2, 11))
        T = singular_accretive_operator(rng, dim, int(rng.integers(1, dim + 1)))
        stats = second_power_inequalities(T, samples=48, seed=k)
        slacks = list(stats["worst_split_slack"].values())
        if math.isfinite(stats["worst_product_slack"]):
            slacks.append(stats["worst_product_slack"])
        worst_vec = max(worst_vec, max(0.0, -min(slacks)))
        if math.isfinite(stats["gamma_bound_slack"]):
            worst_gamma = max(worst_gamma, max(0.0, -stats["gamma_bound_slack"]))
    return [
        ("square-pinv", worst_sq, tols["square-pinv"]),
        ("second-power-vectors", worst_vec, tols["vector-inequality"]),
        ("gamma-square-bound", worst_gamma, tols["second-power-gamma"]),
    ]


def _suite_fractional(rng, tols):
    worst_rel = 0.0
    worst_angle = 0.0
    for _ in range(8):
        dim = int(rng.integers(2, 9))
        T = accretive_operator(rng, dim, max_tan=1.5)
        vals, vecs = np.linalg.eig(T)
        for alpha in (0.25, 0.5, 0.75):
            power = balakrishnan_power(T, alpha)
            oracle = vecs @ np.diag(vals**alpha) @ np.linalg.inv(vecs)
            worst_rel = max(
                worst_rel, operator_norm(power - oracle) / max(operator_norm(oracle), 1e-300)
            )
            omega = sectorial_angle(power)[0]
            worst_angle = max(worst_angle, omega - alpha * math.pi / 2)
    return [
        ("fractional-power-accuracy", worst_rel, tols["balakrishnan-rel"]),
        ("fractional-power-angle", max(0.0, worst_angle), tols["power-angle"]),
    ]


def _suite_factorization(rng, tols):
    worst_sym = 0.0
    worst_one = 0.0
    worst_multiset = 0.0
    vandermonde_fail = 0.0
    separation_fail = 0.0
    for k in range(15):
        dim = int(rng.integers(2, 9))
        T, S = pencil_pair(rng, dim) if k % 2 else commuting_pencil_pair(rng, dim)
        p = QuadraticPencil(T, S)
        f = factorize(p)
        scale = max(1.0, operator_norm(T) ** 2, operator_norm(S))
        lams = np.concatenate([
            complex_gaussian(rng, 8, 2.0),
            rng.standard_normal(4) * 3.0,
        ])
        sym, one = factorization_residuals(f, p, lams)
        worst_sym = max(worst_sym, sym / scale)
        if f.commuting:
            worst_one = max(worst_one, one / scale)
            worst_multiset = max(
                worst_multiset,
                multiset_match_distance(f.spectra_z1 + f.spectra_z2, pencil_spectrum(p)),
            )
        if not vandermonde_check(f):
            vandermonde_fail = 1.0
        if f.separation_regime == "strong" and f.separation <= 0:
            separation_fail = 1.0
    return [
        ("factorization-symmetric", worst_sym, tols["factorization-identity"]),
        ("factorization-one-sided", worst_one, tols["factorization-identity"]),
        ("spectrum-multiset", worst_multiset, tols["spectrum-match"]),
        ("vandermonde-agreement", vandermonde_fail, tols["bound-slack"]),
        ("separation-positive", separation_fail, tols["bound-slack"]),
    ]


def _suite_bvp(rng, tols):
    scalar = BvpProblem(np.zeros((1, 1)), np.eye(1), np.array([1.0]), np.array([0.0]))
    sol = solve_bvp(scalar)
    witness_gap = float(
        np.max(np.abs(sol.values[:, 0] - np.sinh(1 - sol.grid) / math.sinh(1.0)))
    )
    worst_boundary = 0.0
    worst_ode = 0.0
    problems = []
    for _ in range(15):
        dim = int(rng.integers(2, 7))
        T, S = commuting_pencil_pair(rng, dim)
        u0 = complex_gaussian(rng, dim)
        u1 = complex_gaussian(rng, dim)
        problems.append((BvpProblem(T, S, u0, u1), u0, u1))
    for p, u0, u1 in problems:
        s = solve_bvp(p)
        scale = 1 + np.linalg.norm(u0) + np.linalg.norm(u1)
        worst_boundary = max(worst_boundary, s.boundary_residual / scale)
        worst_ode = max(worst_ode, s.ode_residual)
    # Superposition on one fixed problem: combine two data sets linearly.
    p, u0, u1 = problems[0]
    T, S = p.T, p.S
    v0 = complex_gaussian(rng, p.dim)
    v1 = complex_gaussian(rng, p.dim)
    a, b = 0.7 - 0.2j, -1.3 + 0.4j
    s1 = solve_bvp(BvpProblem(T, S, u0, u1))
    s2 = solve_bvp(BvpProblem(T, S, v0, v1))
    s12 = solve_bvp(BvpProblem(T, S, a * u0 + b * v0, a * u1 + b * v1))
    superpose = float(np.max(np.abs(s12.values - a * s1.values - b * s2.values)))
    fd = fd_oracle(scalar, 400, solution=sol)
    return [
        ("bvp-sinh-witness", witness_gap, tols["bvp-witness"]),
        ("bvp-boundary-residual", worst_boundary, tols["boundary-residual"]),
        ("bvp-ode-residual", worst_ode, tols["ode-residual"]),
        ("bvp-superposition", superpose, tols["superposition"]),
        ("bvp-fd-gap", fd.oracle_gap, tols["fd-gap"]),
    ]


def _suite_laplacian(rng, tols):
    m = LaplacianModel(1.0, 0.0, 0.1, 16)
    u0 = complex_gaussian(rng, 16)
    u1 = complex_gaussian(rng, 16)
    out = demo(m, u0, u1, x_samples=9)
    condition_fail = 0.0 if out["condition_sum"] < out["condition_bound"] else 1.0
    scale = 1 + np.linalg.norm(u0) + np.linalg.norm(u1)
    screen_fail = 1.0
    try:
        demo(LaplacianModel(1.0, 0.01, 0.1, 16), u0, u1, x_samples=5)
    except ModelError:
        screen_fail = 0.0
    return [
        ("laplacian-condition", condition_fail, tols["bound-slack"]),
        ("laplacian-oracle-gap", out["oracle_gap"], tols["mode-oracle"]),
        ("laplacian-boundary", out["boundary_residual"] / scale, tols["boundary-residual"]),
        ("laplacian-screen", screen_fail, tols["bound-slack"]),
    ]


_REGISTRY = [
    ("pinv-basics", _suite_pinv_basics),
    ("pinv-accretive", _suite_pinv_accretive),
    ("numerical-range", _suite_numerical_range),
    ("sectorial", _suite_sectorial),
    ("perturbation", _suite_perturbation),
    ("neumann", _suite_neumann),
    ("second-power", _suite_second_power),
    ("fractional", _suite_fractional),
    ("factorization", _suite_factorization),
    ("bvp", _suite_bvp),
    ("laplacian", _suite_laplacian),
]


def run_selftest(seed=42, overrides=None):
    """Run every suite; return the full conformance report dict."""
    tols = resolve(overrides)
    claims = []
    runtimes = {}
    for label, fn in _REGISTRY:
        rng = rng_for(seed, label)
        start = time.perf_counter()
        try:
            results = fn(rng, tols)
        except Exception as exc:  # a crashed suite is a failed claim, not a crash
            results = [(f"{label}-completed", 1.0, tols["bound-slack"], False, str(exc))]
        elapsed = time.perf_counter() - start
        for item in results:
            name, measured, tolerance = item[0], float(item[1]), float(item[2])
            ok = item[3] if len(item) > 3 else (measured <= tolerance)
            entry = {
                "claim": name,
                "status": "pass" if ok else "fail",
                "measured": measured,
                "tolerance": tolerance,
            }
            if len(item) > 4:
                entry["error"] = item[4]
            claims.append(entry)
            runtimes[name] = round(elapsed, 6)
    names = [c["claim"] for c in claims]
    if len(names) != len(set(names)):
        raise RuntimeError(f"duplicate claim ids in registry: {sorted(names)}")
    passed = sum(c["status"] == "pass" for c in claims)
    body = {
        "version": __version__,
        "seed": int(seed),
        "tolerance_overrides": {k: float(v) for k, v in sorted((overrides or {}).items())},
        "claims": claims,
        "summary": {"total": len(claims), "passed": passed, "failed": len(claims) - passed},
    }
    return {
        "format": FORMAT_VERSION,
        "kind": "conformance",
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "runtime_seconds": runtimes,
        "body": body,
    }


def canonical_body(report):
    """Serialized determinism unit: the body without volatile header fields."""
    return json.dumps(report["body"], sort_keys=True)
