"""Integrals of a density over polytopes, faces and simplices.

The quadrature path splits the region into pieces on which one linear form
attains the minimum, so the integrand is ``l(y) ** a`` with ``l`` affine.
When ``a`` is not an integer, each piece is cut into dyadic slabs
``hi / 2**(j+1) <= l <= hi / 2**j``; on every slab ``l ** a`` is smooth
relative to its size, and the slabs accumulate geometrically toward the
singular boundary ``l = 0``.  Each slab is triangulated and integrated with a
Grundmann-Moeller rule; the difference to the next-lower rule is the error
estimate.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import QhullError

from . import _accel
from .bodies import (DegenerateBodyError, Face, hull_halfspaces, triangulate_points,
                     vertices_from_halfspaces, _simplex_volumes)
from .quadrature import grundmann_moeller, rule_index_for

DEFAULT_ORDER = 8
DEFAULT_RTOL = 1e-10
MAX_DEPTH = 20
MC_SAMPLES = 1_000_000
MC_CHUNK = 1 << 16
_SINGULAR_RULE_ERROR = 1e-2
FRACTIONAL_EXTRA_INDEX = 2


@dataclass(frozen=True)
class MeasureResult:
    value: float
    method: str
    error_estimate: float
    count: int


@dataclass(frozen=True)
class HomogeneityExponent:
    """Degree ``n + 1/p`` of the measure and its reciprocal ``q``."""

    one_over_q: float
    q: float


def homogeneity_exponent(n, p):
    one_over_q = n + 1.0 / p
    return HomogeneityExponent(one_over_q, 1.0 / one_over_q)


# ---------------------------------------------------------------------------
# quadrature core
# ---------------------------------------------------------------------------

def _integer_exponent(a):
    r = round(a)
    return int(r) if abs(a - r) <= 1e-12 else None


def _rule_indices(order, a):
    s = rule_index_for(order)
    ia = _integer_exponent(a)
    if ia is not None:
        return max(s, rule_index_for(ia))
    # t ** a on a dyadic slab [u/2, u] needs two extra degrees to reach ~1e-12
    return s + FRACTIONAL_EXTRA_INDEX


def _normalise(A, b):
    norms = np.linalg.norm(A, axis=1)
    zero = norms <= 1e-14
    if np.any(b[zero] < 0):
        return None, None
    A, b, norms = A[~zero], b[~zero], norms[~zero]
    return A / norms[:, None], b / norms


def _rule_on_points(points, W, c, a, s):
    """Integrate min(c + W y)_+ ** a over conv(points) with rules s and s - 1."""
    k = points.shape[1]
    try:
        simp = triangulate_points(points)
    except QhullError:  # flat slab: zero measure
        return 0.0, 0.0, 0
    if len(simp) == 0:
        return 0.0, 0.0, 0
    simp = np.ascontiguousarray(simp)
    bary, w = grundmann_moeller(s, k)
    hi = _accel.simplex_rule_sums(simp, np.ascontiguousarray(bary), np.ascontiguousarray(w), W, c, a).sum()
    if k == 0:
        return float(hi), 0.0, 1
    bary, w = grundmann_moeller(s - 1, k)
    lo = _accel.simplex_rule_sums(simp, np.ascontiguousarray(bary), np.ascontiguousarray(w), W, c, a).sum()
    return float(hi), abs(float(hi - lo)), len(simp) * len(bary)


def integrate_region(d, origin, basis, A, b, order=DEFAULT_ORDER, rtol=DEFAULT_RTOL,
                     max_depth=MAX_DEPTH):
    """Integrate ``d`` over the flat polytope ``{origin + basis @ y : A y <= b}``.

    Returns ``(value, error_estimate, node_count)``.  The measure is the
    k-dimensional Hausdorff measure, ``k = basis.shape[1]``.
    """
    origin = np.asarray(origin, dtype=float)
    basis = np.asarray(basis, dtype=float).reshape(origin.shape[0], -1)
    k = basis.shape[1]
    W_all = np.ascontiguousarray(d.forms @ basis)
    c_all = np.ascontiguousarray(d.forms @ origin)
    a = d.exponent
    if k == 0:
        return float(d.eval(origin)), 0.0, 1
    s = _rule_indices(order, a)
    polynomial = _integer_exponent(a) is not None
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    r = W_all.shape[0]
    total, err, nodes = 0.0, 0.0, 0
    for i in range(r):
        rows = [A, -W_all[i:i + 1]]
        rhs = [b, c_all[i:i + 1]]
        for j in range(r):
            if j != i:
                rows.append((W_all[i] - W_all[j])[None, :])
                rhs.append(np.array([c_all[j] - c_all[i]]))
        Ap, bp = _normalise(np.vstack(rows), np.concatenate(rhs))
        if Ap is None:
            continue
        verts = vertices_from_halfspaces(Ap, bp)
        if len(verts) < k + 1:
            continue
        W = np.ascontiguousarray(W_all[i:i + 1])
        c = np.ascontiguousarray(c_all[i:i + 1])
        vals = verts @ W[0] + c[0]
        lo, hi = max(float(vals.min()), 0.0), float(vals.max())
        if hi <= 0.0:
            continue
        wnorm = float(np.linalg.norm(W[0]))
        spread = hi - lo
        if polynomial or spread <= 1e-13 * hi or wnorm == 0.0:
            v, e, q = _rule_on_points(verts, W, c, a, s)
            total, err, nodes = total + v, err + e, nodes + q
            continue
        piece_vol = float(_simplex_volumes(triangulate_points(verts)).sum())
        wu = W[0] / wnorm
        upper = hi
        depth = 0
        piece_total = 0.0
        while True:
            rem_frac = min(1.0, k * (upper - lo) / spread)
            rem_bound = upper ** a * piece_vol * rem_frac
            last = (upper <= 2.0 * lo or depth >= max_depth
                    or _SINGULAR_RULE_ERROR * rem_bound <= 0.1 * rtol * (abs(total) + piece_total))
            t_lo = lo if last else upper / 2.0
            slab_A = np.vstack([Ap, wu[None, :], -wu[None, :]])
            slab_b = np.concatenate([bp, [(upper - c[0]) / wnorm, (c[0] - t_lo) / wnorm]])
            pts = vertices_from_halfspaces(slab_A, slab_b)
            if len(pts) >= k + 1:
                v, e, q = _rule_on_points(pts, W, c, a, s)
                piece_total += v
                err += e
                nodes += q
            if last:
                break
            upper = t_lo
            depth += 1
        total += piece_total
    return total, err, nodes


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def measure_simplex(d, S, order=DEFAULT_ORDER):
    """Integral of d over an n-simplex given by its n + 1 vertices."""
    S = np.asarray(S, dtype=float)
    n = S.shape[1]
    if S.shape[0] != n + 1:
        raise ValueError("a simplex in R^n needs n + 1 vertices")
    if n >= 1:
        vol = _simplex_volumes(S[None])[0]
        if vol <= 1e-14 * max(1.0, np.abs(S).max()) ** n:
            raise DegenerateBodyError("degenerate simplex")
    _, A, b = hull_halfspaces(S)
    v, e, q = integrate_region(d, np.zeros(n), np.eye(n), A, b, order=order)
    return MeasureResult(v, "quadrature", e, q)


def measure_body(d, K, method="quadrature", samples=MC_SAMPLES, seed=0, order=DEFAULT_ORDER,
                 rtol=DEFAULT_RTOL):
    """mu(K) by graded simplex quadrature or by rejection sampling."""
    if K.embedding is None:
        if K.dim != d.dim:
            raise ValueError("density and body dimensions differ")
        origin, basis = np.zeros(K.dim), np.eye(K.dim)
    else:
        origin, basis = K.embedding
        if origin.shape[0] != d.dim:
            raise ValueError("density and embedding dimensions differ")
    if method == "quadrature":
        v, e, q = integrate_region(d, origin, basis, K.normals, K.offsets, order=order, rtol=rtol)
        return MeasureResult(v, "quadrature", e, q)
    if method == "monte_carlo":
        return _monte_carlo(d, origin, basis, K, samples, seed)
    raise ValueError(f"unknown method {method!r}")


def measure_face(d, F, order=DEFAULT_ORDER, rtol=DEFAULT_RTOL):
    """Integral of d over a flat face against (n-1)-dimensional Hausdorff measure."""
    if not isinstance(F, Face):
        raise TypeError("expected a Face")
    k = F.dim
    if k == 0:
        return MeasureResult(float(d.eval(F.origin)), "quadrature", 0.0, 1)
    _, A, b = hull_halfspaces(F.coords)
    v, e, q = integrate_region(d, F.origin, F.tangent, A, b, order=order, rtol=rtol)
    return MeasureResult(v, "quadrature", e, q)


def _monte_carlo(d, origin, basis, K, samples, seed):
    if samples < 2:
        raise ValueError("need at least two samples")
    W = np.ascontiguousarray(d.forms @ basis)
    c = np.ascontiguousarray(d.forms @ origin)
    lo = K.vertices.min(axis=0)
    hi = K.vertices.max(axis=0)
    A = np.ascontiguousarray(K.normals)
    b = np.ascontiguousarray(K.offsets)
    rng = np.random.Generator(np.random.Philox(seed))
    count, mean, m2 = 0, 0.0, 0.0
    remaining = samples
    while remaining > 0:
        size = min(MC_CHUNK, remaining)
        U = rng.random((size, K.dim))
        nb, mb, m2b = _accel.welford_chunk(U, lo, hi, A, b, W, c, d.exponent, 1e-12)
        delta = mb - mean
        tot = count + nb
        mean += delta * nb / tot
        m2 += m2b + delta * delta * count * nb / tot
        count = tot
        remaining -= size
    stderr = math.sqrt(m2 / (count - 1) / count)
    return MeasureResult(float(mean), "monte_carlo", stderr, count)
