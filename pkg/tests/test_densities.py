import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homocone.densities import (DirectionalPower, MinLinearPower, check_homogeneity,
                                check_p_concavity, density_from_dict)

ps = st.sampled_from([0.5, 1.0, 2.0, 1000.0])
coords = st.floats(-3, 3, allow_nan=False)


def test_directional_values():
    d = DirectionalPower([0.0, 1.0], 2.0)
    assert d.eval([3.0, 4.0]) == pytest.approx(2.0)
    assert d.eval([1.0, -1.0]) == 0.0
    assert d.eval_symmetrized([1.0, -4.0]) == pytest.approx(2.0)
    np.testing.assert_allclose(d([[0, 1], [0, 9], [0, -1]]), [1, 3, 0])


def test_min_linear_values():
    d = MinLinearPower([[1.0, 0.0], [0.0, 1.0]], 1.0)
    assert d.eval([2.0, 3.0]) == 2.0
    assert d.eval([-1.0, 3.0]) == 0.0


def test_invalid_inputs():
    with pytest.raises(ValueError):
        DirectionalPower([1.0, 1.0], 1.0)
    with pytest.raises(ValueError):
        DirectionalPower([1.0, 0.0], 0.0)
    with pytest.raises(ValueError):
        DirectionalPower([1.0, 0.0], float("inf"))
    with pytest.raises(ValueError):
        MinLinearPower([[0.0, 0.0]], 1.0)


def test_duplicate_forms_collapse():
    d = MinLinearPower([[0, 1], [1, 1], [0, 1]], 1.0)
    assert d.forms.shape == (2, 2)


def test_round_trip():
    for d in (DirectionalPower([0.6, 0.8], 0.5), MinLinearPower([[1, 0], [1, 1]], 2.0)):
        e = density_from_dict(d.to_dict())
        np.testing.assert_array_equal(e.forms, d.forms)
        assert e.p == d.p and type(e) is type(d)


def test_interior_direction_in_support():
    d = MinLinearPower([[1.0, 0.2, 0.0], [0.1, 1.0, 0.3]], 1.0)
    w = d.interior_direction()
    assert d.eval(w) > 0


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 1000.0])
def test_builtin_checks_pass(p):
    d = MinLinearPower([[0.6, 0.8], [-0.3, 1.0]], p)
    assert check_homogeneity(d).passed
    assert check_p_concavity(d).passed


@given(ps, st.lists(coords, min_size=3, max_size=3), st.floats(0.01, 50))
def test_homogeneity_property(p, x, a):
    d = DirectionalPower(np.array([0.48, 0.6, 0.64]), p)
    x = np.array(x)
    assert d.eval(a * x) == pytest.approx(a ** (1 / p) * d.eval(x), rel=1e-12, abs=1e-300)


@given(ps, st.lists(coords, min_size=2, max_size=2), st.lists(coords, min_size=2, max_size=2),
       st.floats(0, 1))
def test_p_concavity_property(p, x, y, lam):
    d = MinLinearPower([[0.6, 0.8], [-0.2, 1.0]], p)
    x, y = np.array(x), np.array(y)
    if d.eval(x) <= 0 or d.eval(y) <= 0:
        return
    lhs = d.eval(lam * x + (1 - lam) * y) ** p
    rhs = lam * d.eval(x) ** p + (1 - lam) * d.eval(y) ** p
    assert lhs >= rhs - 1e-9 * max(1.0, rhs)
