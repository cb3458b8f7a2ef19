"""Certified perturbation of pseudoinverses: update formula, bounds, Neumann."""

import math

import numpy as np
import pytest

from accretive.errors import HypothesisError, PreconditionError
from accretive.pinv import (
    neumann_identity_check,
    perturbation_certificate,
    perturbed_pinv,
    pseudoinverse,
    range_projector,
    row_projector,
    square_pinv_identities,
    subspace_distance,
)
from accretive.sampling import (
    accretive_operator,
    commuting_accretive_pair,
    complex_gaussian,
    random_unitary,
    rng_for,
)

SEED = 47202
N_TRIALS = 40

# Scalar Neumann witness: T = 1, S = 0.5, k = 3.  Exact value 1/(1+0.5) = 2/3,
# partial sum 1 - 0.5 + 0.25 - 0.125 = 0.625, deviation 2/3 - 5/8 = 1/24.
NEUMANN_SCALAR_DEV = 1.0 / 24.0


def certified_pair(rng, dim, rank, contraction=0.6, accretive_s=True):
    """(T, S) with S acting inside T's common range/row block.

    T = Q M Q* is accretive EP of the given rank; S = Q B Q* stays in the same
    block so both inclusion residuals vanish, and B is scaled to put the
    contraction norm ||T_pinv S|| near the requested level.
    """
    Q = random_unitary(rng, dim)[:, :rank]
    M = accretive_operator(rng, rank)
    if accretive_s:
        B = accretive_operator(rng, rank, max_tan=1.5)
    else:
        B = complex_gaussian(rng, (rank, rank))
    T = Q @ M @ Q.conj().T
    P = pseudoinverse(T).pinv
    S = Q @ B @ Q.conj().T
    c = np.linalg.norm(P @ S, 2)
    S *= contraction * rng.random() / c
    return T, S


def test_certificate_trivial_cases():
    cert = perturbation_certificate(np.diag([1.0, 0.0]), np.diag([0.3, 0.0]))
    assert cert.mode == "both"
    assert cert.contraction_TdS == pytest.approx(0.3)
    assert cert.range_inclusion_residual <= 1e-14
    assert cert.s_accretive

    bad = perturbation_certificate(np.diag([1.0, 0.0]), np.diag([0.0, 0.3]))
    assert bad.mode == "fail"
    assert bad.range_inclusion_residual == pytest.approx(0.3)
    assert bad.kernel_inclusion_residual == pytest.approx(0.3)


def test_certificate_records_informational_ratio():
    cert = perturbation_certificate(np.diag([2.0, 0.0]), np.diag([0.5, 0.0]))
    assert cert.norm_over_gamma == pytest.approx(0.25)
    assert cert.theta == pytest.approx(0.0, abs=1e-12)


def test_perturbed_pinv_trivial_cases():
    T = np.diag([1.0, 0.0])
    assert np.allclose(perturbed_pinv(T, np.zeros((2, 2))), pseudoinverse(T).pinv)
    got = perturbed_pinv(T, np.diag([0.3, 0.0]))
    assert np.allclose(got, np.diag([1 / 1.3, 0.0]), atol=1e-14)


def test_perturbed_pinv_scalar_scaling():
    rng = rng_for(SEED, "scaling")
    for _ in range(N_TRIALS // 2):
        dim = int(rng.integers(1, 9))
        T = accretive_operator(rng, dim)
        eps = 0.4 * rng.random() + 0.05
        P = pseudoinverse(T).pinv
        got = perturbed_pinv(T, eps * T)
        assert np.linalg.norm(got - P / (1 + eps), 2) <= 1e-12 * max(1.0, np.linalg.norm(P, 2))


def test_perturbed_pinv_fail_mode_raises():
    with pytest.raises(HypothesisError, match="hypotheses unmet"):
        perturbed_pinv(np.diag([1.0, 0.0]), np.diag([0.0, 0.3]))


def test_update_formula_matches_direct_pinv():
    rng = rng_for(SEED, "formula-direct")
    for k in range(N_TRIALS):
        dim = int(rng.integers(2, 12))
        rank = int(rng.integers(1, dim + 1))
        T, S = certified_pair(rng, dim, rank)
        cert = perturbation_certificate(T, S)
        assert cert.mode == "both", f"trial {k}"
        got = perturbed_pinv(T, S, cert)
        res_T = pseudoinverse(T)
        direct = pseudoinverse(T + S)
        pinv_scale = max(1.0, np.linalg.norm(res_T.pinv, 2))
        assert np.linalg.norm(got - direct.pinv, 2) <= 1e-8 * pinv_scale, f"trial {k}"
        assert direct.rank == res_T.rank, f"trial {k}"
        # Range and kernel survive the perturbation.
        assert subspace_distance(range_projector(T + S), range_projector(T)) <= 1e-8
        assert subspace_distance(row_projector(T + S), row_projector(T)) <= 1e-8


def test_error_and_norm_bounds():
    rng = rng_for(SEED, "bounds")
    for k in range(N_TRIALS):
        dim = int(rng.integers(2, 10))
        rank = int(rng.integers(1, dim + 1))
        T, S = certified_pair(rng, dim, rank)
        cert = perturbation_certificate(T, S)
        P = pseudoinverse(T).pinv
        pn = np.linalg.norm(P, 2)
        diff = np.linalg.norm(pseudoinverse(T + S).pinv - P, 2)
        bound = np.linalg.norm(S, 2) * pn ** 2 / (1 - cert.contraction_TdS)
        assert diff <= bound + 1e-10, f"trial {k}"
        if cert.s_accretive and cert.theta is not None and cert.theta < math.pi / 2:
            norm_bound = 2 * pn + (1 + math.tan(cert.theta)) ** 2 * pn ** 2
            assert np.linalg.norm(pseudoinverse(T + S).pinv, 2) <= norm_bound + 1e-10


def test_neumann_scalar_witness():
    dev = neumann_identity_check(np.array([[1.0]]), np.array([[0.5]]), 3)
    assert dev == pytest.approx(NEUMANN_SCALAR_DEV, abs=1e-14)
    assert neumann_identity_check(np.eye(3), np.zeros((3, 3)), 7) == pytest.approx(0.0)


def test_neumann_tail_bound():
    rng = rng_for(SEED, "neumann")
    for k in range(N_TRIALS // 2):
        dim = int(rng.integers(2, 9))
        rank = int(rng.integers(1, dim + 1))
        T, S = certified_pair(rng, dim, rank)
        cert = perturbation_certificate(T, S)
        P = pseudoinverse(T).pinv
        c = cert.contraction_TdS
        for order in (0, 3, 20):
            dev = neumann_identity_check(T, S, order)
            tail = c ** (order + 1) * np.linalg.norm(P, 2) / (1 - c)
            assert dev <= tail + 1e-12, f"trial {k}, k={order}"
        # At moderate contraction the order-20 sum is already below 1e-6.
        T2, S2 = certified_pair(rng, dim, rank, contraction=0.4)
        assert neumann_identity_check(T2, S2, 20) <= 1e-6, f"trial {k}"


def test_neumann_contraction_precondition():
    with pytest.raises(PreconditionError):
        neumann_identity_check(np.eye(2), 2 * np.eye(2), 3)


def test_square_identities_trivial():
    got = square_pinv_identities(np.diag([1.0, 2.0]), np.zeros((2, 2)))
    assert np.allclose(got, np.diag([1.0, 0.25]), atol=1e-14)
    got2 = square_pinv_identities(np.diag([1.0, 0.0]), np.diag([0.3, 0.0]))
    assert np.allclose(got2, np.diag([1 / 1.3, 0.0]), atol=1e-14)


def test_square_identities_match_direct():
    rng = rng_for(SEED, "square")
    for k in range(N_TRIALS // 2):
        dim = int(rng.integers(2, 9))
        T, S = commuting_accretive_pair(rng, dim)
        # Scale S to a safe contraction level against (T^2)_pinv.
        P2 = pseudoinverse(T @ T).pinv
        S = S * (0.5 / max(np.linalg.norm(P2 @ S, 2), 1e-12))
        got = square_pinv_identities(T, S)
        direct = pseudoinverse(T @ T + S).pinv
        scale = max(1.0, np.linalg.norm(P2, 2))
        assert np.linalg.norm(got - direct, 2) <= 1e-8 * scale, f"trial {k}"


def test_square_identities_hypothesis_failure():
    with pytest.raises(HypothesisError):
        square_pinv_identities(np.diag([1.0, 0.0]), np.diag([0.0, 0.5]))
