import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homocone import harness as H
from homocone.bodies import box, cube, scale, vpolytope, zonotope
from homocone.densities import DirectionalPower, MinLinearPower
from homocone.frames import WeightedFrame, orthonormal_frame, regular_triple

S = math.sqrt(0.5)
T1 = DirectionalPower([0.0, 1.0], 1.0)
SQUARE = cube(0.0, 1.0, 2)
ROT = np.array([[S, S], [-S, S]])


def test_t3_loomis_whitney_values():
    # mu = 1/2, exponent n + 1/p - 1 = 2; P(u_i) = sqrt(2)/3; exponents 3/2
    rep = H.check_theorem_lw(T1, SQUARE, ROT)
    want_rhs = 8 * 2.25 / math.sqrt(2) * (math.sqrt(2) / 3) ** 3
    assert want_rhs == pytest.approx(4 / 3)
    assert rep.lhs == pytest.approx(0.25, rel=1e-9)
    assert rep.rhs == pytest.approx(want_rhs, rel=1e-9)
    assert rep.ratio == pytest.approx(16 / 3, rel=1e-9)
    assert rep.passed


def test_t3_ball_values():
    rep = H.check_theorem_ball(T1, SQUARE, orthonormal_frame(ROT))
    want = 8 / (math.sqrt(2) / 2) * 2 * 1.5 * (math.sqrt(2) / 3) ** 3
    assert rep.rhs == pytest.approx(want, rel=1e-9)
    assert rep.ratio == pytest.approx(want / 0.25, rel=1e-9)


def test_triple_ball_passes():
    rep = H.check_theorem_ball(T1, SQUARE, regular_triple(np.deg2rad(10)))
    assert rep.hypothesis_ok and rep.passed and rep.ratio > 1


def test_face_bound_values():
    # face {u1 + beta u2}: g = (1 + beta) sqrt(2)/2, integral sqrt(2)
    rep = H.check_face_bound(T1, ROT, [1.0, 1.0], 0)
    assert rep.lhs == pytest.approx(math.sqrt(2), rel=1e-10)
    assert rep.rhs == pytest.approx(4 / 9 * 1.5 * math.sqrt(2), rel=1e-12)


def test_face_bound_needs_u_i_in_support():
    rep = H.check_face_bound(T1, -ROT, [1.0, 1.0], 0)
    assert not rep.hypothesis_ok and rep.status == "skip"


def test_one_dim_zonotope_bound_equality():
    d = DirectionalPower([1.0], 1.0)
    rep = H.check_zonotope_bound(d, orthonormal_frame([[1.0]]), [1.7])
    assert rep.lhs == pytest.approx(1.7 ** 2 / 2, rel=1e-12)
    assert abs(rep.lhs - rep.rhs) <= 1e-9


def test_borell_equality_for_dilates():
    d = DirectionalPower([0.6, 0.8], 0.5)
    E = vpolytope([[0, 0.3], [1, 0.5], [0.2, 1.2]])
    rep = H.check_borell(d, E, scale(E, 2.0), 0.3)
    assert rep.ratio == pytest.approx(1.0, abs=1e-9)


def test_minkowski_equality_when_equal():
    d = MinLinearPower([[0.6, 0.8], [-0.2, 1.0]], 2.0)
    A = vpolytope([[0, 0.3], [1, 0.5], [0.2, 1.2], [-0.4, 0.8]])
    assert H.check_minkowski_first(d, A, A).ratio == pytest.approx(1.0, abs=1e-6)


def test_minkowski_t1_example():
    rep = H.check_minkowski_first(T1, SQUARE, zonotope(np.eye(2)))
    # mu(A) = 1/2, mu(B) = mu([-1,1]^2) = 1, q mu_1(A, B) = (1/3)(1 + 1) = 2/3
    assert rep.lhs == pytest.approx(0.5 ** (2 / 3), rel=1e-9)
    assert rep.rhs == pytest.approx(2 / 3, rel=1e-9)


def test_hypothesis_failures_are_skips():
    assert H.check_theorem_lw(T1, SQUARE, np.eye(2)).status == "skip"
    bad = WeightedFrame([[1.0, 0.0], [0.0, 1.0]], [2.0, 1.0])
    assert H.check_theorem_ball(T1, SQUARE, bad).status == "skip"
    assert H.check_zonotope_bound(T1, bad, [1, 1]).status == "skip"
    assert H.check_theorem_lw(T1, SQUARE, [[1.0, 0.1], [0.0, 1.0]]).status == "skip"


def test_identities_on_t1():
    assert H.check_pyramid(T1, SQUARE).residual < 1e-12
    assert H.check_mixed_routes(T1, SQUARE, [1.0, 0.0]).passed
    assert H.check_projection_routes(T1, SQUARE, [1.0, 0.0]).residual < 1e-12
    assert H.check_self_mixed(T1, zonotope(np.eye(2))).passed
    assert H.check_linearity(T1, SQUARE, zonotope(np.eye(2)), zonotope([[1, 1.0], [0.2, -0.1]]), 2.0).passed


def test_measure_mc_check():
    rep = H.check_measure_mc(T1, SQUARE, samples=200_000, seed=5)
    assert rep.passed


def test_projection_inequality_and_monotonicity():
    d = DirectionalPower([0.6, 0.8], 0.5)
    Z = zonotope([[1.0, 0.2], [0.3, 1.0], [1.0, -1.0]])
    for u in ([1.0, 0.0], [0.0, 1.0], [S, S]):
        assert H.check_projection_inequality(d, Z, u).passed
    assert H.check_monotonicity(d, [0.6, 0.8]).passed
    assert H.check_monotonicity(d, [-0.6, -0.8]).status == "skip"


def test_classical_equality_for_aligned_boxes():
    for K in (cube(0, 1, 2), box(np.eye(3), [0.5, 1.0, 2.0])):
        assert H.classical_lw_ratio(K, np.eye(K.dim)) == pytest.approx(1.0, abs=1e-9)


def test_lebesgue_constants_decrease():
    reps = H.lebesgue_limit_study(SQUARE, ROT, [1, 10, 100, 1000], [0.0, 1.0])
    consts = [r.metadata["constant"] for r in reps]
    assert all(a > b for a, b in zip(consts, consts[1:]))
    gaps = [r.metadata["gap_to_limit"] for r in reps]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_lebesgue_study_rejects_orthogonal_theta():
    reps = H.lebesgue_limit_study(SQUARE, np.eye(2), [1, 10], [0.0, 1.0])
    assert reps[0].status == "skip"


def _ratio_pair(d, K, U, t):
    return H.check_theorem_lw(d, K, U).ratio, H.check_theorem_lw(d, scale(K, t), U).ratio


@given(st.integers(0, 10_000), st.sampled_from([0.5, 2.0]), st.sampled_from([0.5, 1.0, 2.0]))
def test_theorem_ratio_scale_invariant(seed, t, p):
    rng = np.random.default_rng(seed)
    d = DirectionalPower([0.6, 0.8], p)
    K = vpolytope(rng.normal(size=(6, 2)) * 0.6 + [0.6, 0.8])
    a, b = _ratio_pair(d, K, ROT, t)
    assert b == pytest.approx(a, rel=1e-6)
    F = regular_triple(0.3)
    a = H.check_theorem_ball(d, K, F).ratio
    b = H.check_theorem_ball(d, scale(K, t), F).ratio
    assert b == pytest.approx(a, rel=1e-6)


@given(st.integers(0, 10_000), st.sampled_from([0.5, 1.0, 2.0]), st.floats(0.05, 0.95))
def test_borell_holds_property(seed, p, lam):
    rng = np.random.default_rng(seed)
    d = DirectionalPower([0.0, 1.0], p)
    E = vpolytope(rng.normal(size=(5, 2)) * 0.5 + [0, 1])
    F = vpolytope(rng.normal(size=(5, 2)) * 0.5 + [0.5, 1])
    assert H.check_borell(d, E, F, lam).ratio >= 1 - 1e-9
