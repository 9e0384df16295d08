import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homocone.bodies import DegenerateBodyError, cube, facets, make_face, scale, vpolytope, zonotope
from homocone.densities import DirectionalPower, MinLinearPower
from homocone.measure import homogeneity_exponent, measure_body, measure_face, measure_simplex
from oracles import simplex_linear_power

ps = st.sampled_from([0.5, 1.0, 2.0, 1000.0])


def test_t1_square_measure():
    d = DirectionalPower([0.0, 1.0], 1.0)
    assert measure_body(d, cube(0.0, 1.0, 2)).value == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 1000.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_unit_cube_closed_form(n, p):
    # int over [0,1]^n of x_n^(1/p) = 1 / (1 + 1/p)
    theta = np.zeros(n)
    theta[-1] = 1.0
    got = measure_body(DirectionalPower(theta, p), cube(0.0, 1.0, n)).value
    assert got == pytest.approx(1.0 / (1.0 + 1.0 / p), rel=1e-9)


@pytest.mark.parametrize("p", [0.5, 1.0, 3.0, 1000.0])
@pytest.mark.parametrize("n", [2, 3])
def test_simplex_against_divided_differences(n, p):
    rng = np.random.default_rng(int(10 * n + p))
    theta = np.zeros(n)
    theta[-1] = 1.0
    S = rng.normal(size=(n + 1, n))
    S[:, -1] = np.abs(S[:, -1]) + 0.5
    d = DirectionalPower(theta, p)
    want = simplex_linear_power(S, theta, 1.0 / p)
    assert measure_simplex(d, S).value == pytest.approx(want, rel=1e-9)


def test_simplex_crossing_support_boundary():
    # triangle (-1,0), (1,0), (0,1) with g = y_+ ** 2: int = int_0^1 (2(1-y)) y^2 dy = 1/6
    d = DirectionalPower([0.0, 1.0], 0.5)
    got = measure_simplex(d, [[-1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).value
    assert got == pytest.approx(1 / 6, rel=1e-12)
    # shifted down by one half: width 1 - 2y above y = 0, the rest has g = 0
    got = measure_simplex(d, [[-1.0, -0.5], [1.0, -0.5], [0.0, 0.5]]).value
    want = 0.5 ** 3 / 3 - 2 * 0.5 ** 4 / 4
    assert got == pytest.approx(want, rel=1e-10)


def test_simplex_degenerate():
    d = DirectionalPower([0.0, 1.0], 1.0)
    with pytest.raises(DegenerateBodyError):
        measure_simplex(d, [[0, 0], [1, 1], [2, 2]])
    with pytest.raises(ValueError):
        measure_simplex(d, [[0, 0], [1, 1]])


def test_fractional_power_near_support_boundary():
    # g = y ** (1/1000) on [0,1]^2 and on [-1,1]x[0,1]; nearly Lebesgue
    d = DirectionalPower([0.0, 1.0], 1000.0)
    K = vpolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    assert measure_body(d, K).value == pytest.approx(2 * 1000 / 1001, rel=1e-9)


def test_face_measure():
    d = DirectionalPower([0.0, 1.0], 1.0)
    F = make_face([1.0, 0.0], 1.0, [[1.0, 0.0], [1.0, 1.0]])
    assert measure_face(d, F).value == pytest.approx(0.5, rel=1e-12)
    top = [f for f in facets(cube(0, 1, 2)) if f.normal[1] > 0.5][0]
    assert measure_face(d, top).value == pytest.approx(1.0, rel=1e-12)


def test_homogeneity_exponent():
    h = homogeneity_exponent(2, 1.0)
    assert h.one_over_q == 3.0 and h.q == pytest.approx(1 / 3)


def test_unknown_method():
    d = DirectionalPower([0.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        measure_body(d, cube(0, 1, 2), method="magic")


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        measure_body(DirectionalPower([0.0, 1.0], 1.0), cube(0, 1, 3))


@pytest.mark.parametrize("p", [0.5, 2.0])
def test_monte_carlo_agrees(p):
    d = MinLinearPower([[0.3, 1.0, 0.1], [-0.2, 0.9, 0.4]], p)
    K = zonotope([[1.0, 0.2, 0.0], [0.1, 1.0, 0.3], [0.0, 0.2, 1.0]])
    quad = measure_body(d, K)
    mc = measure_body(d, K, method="monte_carlo", samples=400_000, seed=3)
    assert abs(quad.value - mc.value) <= 4 * mc.error_estimate
    assert mc.count == 400_000
    again = measure_body(d, K, method="monte_carlo", samples=400_000, seed=3)
    assert again.value == mc.value


def test_quadrature_error_estimate_small():
    d = DirectionalPower([0.6, 0.8], 0.5)
    r = measure_body(d, zonotope([[1.0, 0.2], [0.3, 1.0], [1.0, -1.0]]))
    assert r.error_estimate < 1e-8 * r.value


@given(ps, st.integers(0, 10_000), st.sampled_from([0.5, 2.0, 3.0]))
def test_measure_scaling_property(p, seed, t):
    rng = np.random.default_rng(seed)
    n = 2 + seed % 2
    d = DirectionalPower(np.eye(n)[-1], p)
    K = vpolytope(rng.normal(size=(n + 4, n)) + np.eye(n)[-1] * 0.5)
    base = measure_body(d, K).value
    if base == 0.0:
        return
    scaled = measure_body(d, scale(K, t)).value
    assert scaled == pytest.approx(t ** (n + 1 / p) * base, rel=1e-7)


@given(ps, st.integers(0, 10_000))
def test_measure_monotone_under_inclusion(p, seed):
    rng = np.random.default_rng(seed)
    d = DirectionalPower([0.6, 0.8], p)
    pts = rng.normal(size=(8, 2)) + [0.3, 0.6]
    small = vpolytope(pts)
    big = vpolytope(np.vstack([pts, rng.normal(size=(3, 2)) * 2]))
    assert measure_body(d, big).value >= measure_body(d, small).value * (1 - 1e-9)
