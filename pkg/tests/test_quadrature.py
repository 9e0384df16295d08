import itertools

import numpy as np
import pytest

from homocone.quadrature import gauss_legendre_unit, grundmann_moeller, rule_index_for
from oracles import simplex_monomial


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("s", [0, 1, 2, 4])
def test_gm_exact_for_monomials(dim, s):
    bary, w = grundmann_moeller(s, dim)
    assert bary.shape[1] == dim + 1
    assert np.isclose(w.sum(), 1.0)
    x = bary[:, 1:]
    vol = 1.0 / np.prod(np.arange(1, dim + 1))
    for alpha in itertools.product(range(2 * s + 2), repeat=dim):
        if sum(alpha) > 2 * s + 1:
            continue
        got = vol * np.sum(w * np.prod(x ** np.array(alpha), axis=1))
        assert got == pytest.approx(simplex_monomial(alpha), rel=1e-11, abs=1e-15)


def test_gm_not_exact_beyond_degree():
    bary, w = grundmann_moeller(1, 2)
    x = bary[:, 1:]
    got = 0.5 * np.sum(w * x[:, 0] ** 4)
    assert abs(got - simplex_monomial((4, 0))) > 1e-6


def test_rule_index_for_order():
    assert rule_index_for(8) == 4
    assert rule_index_for(1) == 1
    assert 2 * rule_index_for(8) + 1 >= 8


def test_gauss_legendre_unit():
    x, w = gauss_legendre_unit(16)
    assert np.all((x > 0) & (x < 1))
    assert w.sum() == pytest.approx(1.0)
    assert np.sum(w * x ** 31) == pytest.approx(1 / 32, rel=1e-13)


def test_gm_negative_index():
    with pytest.raises(ValueError):
        grundmann_moeller(-1, 2)
