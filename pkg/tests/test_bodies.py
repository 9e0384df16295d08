import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from homocone.bodies import (DegenerateBodyError, body_from_dict, box, contains, cube, facets,
                             hpolytope, minkowski_combination, minkowski_sum, parallelepiped_face,
                             project_body, scale, support_function, triangulate,
                             vertices_from_halfspaces, vpolytope, zonotope, zonotope_facets)
from oracles import zonotope_volume

seeds = st.integers(0, 2**32 - 1)


def random_points(seed, n, m=8):
    return np.random.default_rng(seed).normal(size=(m, n))


def test_unit_square():
    K = cube(0.0, 1.0, 2)
    assert K.volume() == pytest.approx(1.0)
    assert len(facets(K)) == 4
    assert len(triangulate(K)) == 2
    assert K.diameter() == pytest.approx(np.sqrt(2))


def test_unit_cube_triangulation():
    K = cube(0.0, 1.0, 3)
    simp = triangulate(K)
    assert len(simp) == 6
    assert K.volume() == pytest.approx(1.0)
    assert sum(F.area() for F in facets(K)) == pytest.approx(6.0)


def test_hpolytope_matches_vertices():
    A = np.vstack([np.eye(2), -np.eye(2)])
    K = hpolytope(A, np.ones(4))
    assert K.volume() == pytest.approx(4.0)
    assert len(vertices_from_halfspaces(A, np.ones(4))) == 4


def test_unbounded_hpolytope_rejected():
    with pytest.raises(ValueError):
        hpolytope([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])


def test_degenerate_inputs():
    with pytest.raises(DegenerateBodyError):
        zonotope([[1.0, 0.0], [2.0, 0.0]])
    with pytest.raises((DegenerateBodyError, ValueError)):
        vpolytope([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


def test_box_validation():
    with pytest.raises(ValueError):
        box([[1.0, 0.0], [1.0, 0.0]], [1.0, 1.0])
    with pytest.raises(ValueError):
        box(np.eye(2), [1.0, -1.0])


@pytest.mark.parametrize("n,m", [(2, 2), (2, 4), (3, 3), (3, 5)])
def test_zonotope_volume_and_facets(n, m):
    G = np.random.default_rng(n * 10 + m).normal(size=(m, n))
    Z = zonotope(G)
    assert Z.volume() == pytest.approx(zonotope_volume(G), rel=1e-10)
    # facet area x height / n gives the volume for an origin-centred body
    total = sum(F.offset * F.area() for F in zonotope_facets(Z)) / n
    assert total == pytest.approx(zonotope_volume(G), rel=1e-10)
    hull = ConvexHull(Z.vertices)
    assert Z.volume() == pytest.approx(hull.volume, rel=1e-10)


def test_parallelepiped_face():
    U = np.eye(2)
    F = parallelepiped_face(U, [2.0, 3.0], 0)
    np.testing.assert_allclose(sorted(F.vertices[:, 1]), [-3.0, 3.0])
    np.testing.assert_allclose(F.vertices[:, 0], [2.0, 2.0])
    assert F.area() == pytest.approx(6.0)


def test_body_dict_round_trip():
    for K in (cube(0, 1, 2), zonotope([[1, 0], [1, 1]]), box(np.eye(2), [1, 2])):
        assert body_from_dict(K.to_dict()).volume() == pytest.approx(K.volume())
    K = body_from_dict({"type": "aabb", "lo": [0, 0, 0], "hi": [1, 2, 3]})
    assert K.volume() == pytest.approx(6.0)
    with pytest.raises(ValueError):
        body_from_dict({"type": "sphere"})


def test_project_zonotope():
    Z = zonotope([[1.0, 0.0], [0.0, 2.0]])
    P = project_body(Z, [1.0, 0.0])
    assert P.is_zonotope and P.dim == 1
    assert P.volume() == pytest.approx(4.0)


@given(seeds)
def test_support_function_additive(seed):
    A = vpolytope(random_points(seed, 2))
    B = vpolytope(random_points(seed + 1, 2))
    u = np.random.default_rng(seed).normal(size=(5, 2))
    S = minkowski_sum(A, B)
    np.testing.assert_allclose(support_function(S, u),
                               support_function(A, u) + support_function(B, u), atol=1e-9)


@given(seeds, st.floats(0.0, 1.0))
def test_minkowski_combination_support(seed, lam):
    A = vpolytope(random_points(seed, 3))
    B = vpolytope(random_points(seed + 7, 3))
    C = minkowski_combination(lam, A, B)
    u = np.random.default_rng(seed).normal(size=(5, 3))
    np.testing.assert_allclose(support_function(C, u),
                               lam * support_function(A, u) + (1 - lam) * support_function(B, u),
                               atol=1e-9)


@given(seeds, st.floats(0.2, 5.0))
def test_scaling_volume(seed, t):
    K = vpolytope(random_points(seed, 3))
    assert scale(K, t).volume() == pytest.approx(t ** 3 * K.volume(), rel=1e-9)


@given(seeds)
def test_vertices_contained_and_hull_volume(seed):
    pts = random_points(seed, 3, 12)
    K = vpolytope(pts)
    assert np.all(contains(K, pts))
    assert K.volume() == pytest.approx(ConvexHull(pts).volume, rel=1e-10)
    assert not contains(K, pts.max(axis=0) + 1.0)


@given(seeds)
def test_zonotope_support_matches_vertices(seed):
    G = np.random.default_rng(seed).normal(size=(4, 3))
    Z = zonotope(G)
    u = np.random.default_rng(seed + 1).normal(size=(6, 3))
    np.testing.assert_allclose(support_function(Z, u), (u @ Z.vertices.T).max(axis=1), rtol=1e-9)
