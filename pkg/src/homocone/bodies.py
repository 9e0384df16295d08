"""Convex polytopes, zonotopes and boxes, with their faces and projections.

Every body is stored in both vertex and halfspace form, computed eagerly at
construction so that instances are immutable and safe to share.  Halfspace
normals are unit vectors; each facet plane appears exactly once.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, HalfspaceIntersection, QhullError

from . import _accel

MEMBERSHIP_TOL = 1e-9
DEGENERACY_TOL = 1e-12
MAX_DIM = 4
MAX_GENERATORS = 10
_BRUTE_FORCE_LIMIT = 2_000_000


class DegenerateBodyError(ValueError):
    """Raised for bodies with empty interior, rank-deficient generators, etc."""


# ---------------------------------------------------------------------------
# small linear-algebra helpers
# ---------------------------------------------------------------------------

def orthonormal_complement(u):
    """Orthonormal basis (as columns, shape (n, n-1)) of the hyperplane u-perp."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    n = u.shape[0]
    # Householder reflection mapping e_k to u; its other columns span u-perp.
    k = int(np.argmax(np.abs(u)))
    e = np.zeros(n)
    e[k] = 1.0
    s = 1.0 if u[k] >= 0 else -1.0
    v = s * u + e
    H = np.eye(n) - 2.0 * np.outer(v, v) / (v @ v)
    cols = [j for j in range(n) if j != k]
    return H[:, cols]


def _normal_of(vectors):
    """Unit normal of the hyperplane spanned by n-1 vectors in R^n (cofactors)."""
    M = np.asarray(vectors, dtype=float)
    n = M.shape[1]
    nu = np.array([(-1) ** i * np.linalg.det(np.delete(M, i, axis=1)) for i in range(n)])
    return nu


def canonical_sign(v, tol=1e-9):
    """Flip v so that its first entry with |entry| > tol is positive."""
    v = np.asarray(v, dtype=float)
    for x in v:
        if abs(x) > tol:
            return v if x > 0 else -v
    return v


def dedupe_points(points, tol):
    """Greedy deduplication preserving first occurrences."""
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return points
    order = np.lexsort(points.T[::-1])
    pts = points[order]
    keep = []
    for i, p in enumerate(pts):
        dup = False
        for j in reversed(keep):
            if pts[j][0] < p[0] - tol:
                break
            if np.max(np.abs(pts[j] - p)) <= tol:
                dup = True
                break
        if not dup:
            keep.append(i)
    return pts[keep]


@lru_cache(maxsize=256)
def _combos(m, k):
    if k == 0 or m < k:
        return np.empty((0, k), dtype=np.int64)
    return np.array(list(itertools.combinations(range(m), k)), dtype=np.int64)


def vertices_from_halfspaces(A, b, tol=None):
    """Vertices of the bounded polytope {y : A y <= b} (possibly empty)."""
    A = np.ascontiguousarray(A, dtype=float)
    b = np.ascontiguousarray(b, dtype=float)
    m, k = A.shape
    if k == 0:
        return np.empty((1, 0)) if np.all(b >= -MEMBERSHIP_TOL) else np.empty((0, 0))
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    if tol is None:
        tol = 1e-11 * scale
    if comb(m, k) > _BRUTE_FORCE_LIMIT:
        pts = _qhull_vertices(A, b)
    else:
        pts = _accel.enumerate_vertices(A, b, _combos(m, k), tol)
    return dedupe_points(pts, 1e-10 * scale)


def _qhull_vertices(A, b):
    from scipy.optimize import linprog

    norms = np.linalg.norm(A, axis=1)
    k = A.shape[1]
    res = linprog(np.r_[np.zeros(k), -1.0], A_ub=np.hstack([A, norms[:, None]]),
                  b_ub=b, bounds=[(None, None)] * k + [(0, None)], method="highs")
    if res.status != 0 or res.x[-1] <= 0:
        return np.empty((0, k))
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), res.x[:k])
    return hs.intersections


def _merge_planes(normals, offsets, tol=1e-9):
    keep_n, keep_h = [], []
    for nu, h in zip(normals, offsets):
        dup = False
        for kn, kh in zip(keep_n, keep_h):
            if np.max(np.abs(kn - nu)) <= tol and abs(kh - h) <= tol * max(1.0, abs(h)):
                dup = True
                break
        if not dup:
            keep_n.append(nu)
            keep_h.append(h)
    return np.array(keep_n), np.array(keep_h)


def hull_halfspaces(points):
    """(hull vertices, unit normals, offsets) of the convex hull of points."""
    points = np.asarray(points, dtype=float)
    k = points.shape[1]
    if k == 1:
        lo, hi = points[:, 0].min(), points[:, 0].max()
        if hi - lo <= DEGENERACY_TOL * max(1.0, abs(hi), abs(lo)):
            raise DegenerateBodyError("interval has empty interior")
        return np.array([[lo], [hi]]), np.array([[1.0], [-1.0]]), np.array([hi, -lo])
    try:
        hull = ConvexHull(points)
    except QhullError as exc:
        raise DegenerateBodyError(f"degenerate hull: {exc}") from None
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    normals, offsets = _merge_planes(normals, offsets)
    return points[hull.vertices], normals, offsets


# ---------------------------------------------------------------------------
# bodies
# ---------------------------------------------------------------------------

class ConvexBody:
    """A convex polytope with nonempty interior.

    Use the constructors :func:`vpolytope`, :func:`hpolytope`,
    :func:`zonotope` and :func:`box` rather than instantiating directly.
    ``embedding`` is set for bodies living in a hyperplane of a larger space
    (see :func:`project_body`); it is ``(origin, basis)`` with basis columns
    orthonormal.
    """

    def __init__(self, kind, vertices, normals, offsets, generators=None,
                 source=None, embedding=None):
        self.kind = kind
        self.vertices = _frozen(vertices)
        self.normals = _frozen(normals)
        self.offsets = _frozen(offsets)
        self.generators = None if generators is None else _frozen(generators)
        self.source = source or {}
        self.embedding = embedding

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def is_zonotope(self):
        return self.generators is not None

    def volume(self):
        """Lebesgue volume, from the triangulation."""
        simp = triangulate(self)
        return float(_simplex_volumes(simp).sum())

    def diameter(self):
        v = self.vertices
        return float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)))

    def to_dict(self):
        if self.kind == "zonotope":
            return {"type": "zonotope", "generators": self.generators.tolist()}
        if self.kind == "box":
            return {"type": "box", "basis": self.source["basis"],
                    "alphas": self.source["alphas"]}
        if self.kind == "hpolytope":
            return {"type": "hpolytope", "normals": self.source["normals"],
                    "offsets": self.source["offsets"]}
        return {"type": "vpolytope", "vertices": self.vertices.tolist()}

    def __repr__(self):
        return f"ConvexBody(kind={self.kind!r}, dim={self.dim}, nverts={len(self.vertices)})"


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def vpolytope(vertices):
    """Convex hull of a finite point set."""
    verts, normals, offsets = hull_halfspaces(np.asarray(vertices, dtype=float))
    return ConvexBody("vpolytope", verts, normals, offsets)


def hpolytope(normals, offsets):
    """Bounded intersection of halfspaces <nu_i, x> <= h_i."""
    A = np.asarray(normals, dtype=float)
    b = np.asarray(offsets, dtype=float)
    if A.ndim != 2 or b.shape != (A.shape[0],):
        raise ValueError("normals must be (m, n) and offsets (m,)")
    _check_bounded(A, b)
    verts = vertices_from_halfspaces(A, b)
    if len(verts) < A.shape[1] + 1:
        raise DegenerateBodyError("halfspaces do not bound a full-dimensional body")
    verts, normals, offsets = hull_halfspaces(verts)
    return ConvexBody("hpolytope", verts, normals, offsets,
                      source={"normals": A.tolist(), "offsets": b.tolist()})


def _check_bounded(A, b):
    from scipy.optimize import linprog

    n = A.shape[1]
    for j in range(n):
        for s in (1.0, -1.0):
            c = np.zeros(n)
            c[j] = -s
            res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
            if res.status == 3:
                raise DegenerateBodyError("halfspace intersection is unbounded")
            if res.status == 2:
                raise DegenerateBodyError("halfspace intersection is empty")


def zonotope(generators):
    """The origin-symmetric zonotope sum_i [-v_i, v_i]."""
    G = np.array(generators, dtype=float, ndmin=2)
    n = G.shape[1]
    G = G[np.linalg.norm(G, axis=1) > DEGENERACY_TOL]
    if len(G) == 0 or np.linalg.matrix_rank(G) < n:
        raise DegenerateBodyError("zonotope generators must span R^n")
    if n > MAX_DIM or len(G) > MAX_GENERATORS:
        raise ValueError(f"zonotope limited to n <= {MAX_DIM}, m <= {MAX_GENERATORS}")
    normals, offsets = _zonotope_planes(G)
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=len(G))))
    pts = signs @ G
    verts = hull_halfspaces(pts)[0] if n > 1 else np.array([[-offsets[1]], [offsets[0]]])
    return ConvexBody("zonotope", verts, normals, offsets, generators=G)


def box(basis, alphas):
    """Parallelepiped sum_i alpha_i [-u_i, u_i] for an orthonormal basis u_i."""
    U = np.array(basis, dtype=float, ndmin=2)
    a = np.asarray(alphas, dtype=float)
    n = U.shape[1]
    if U.shape != (n, n) or a.shape != (n,):
        raise ValueError("box needs n basis vectors and n half-lengths")
    if np.max(np.abs(U @ U.T - np.eye(n))) > 1e-9:
        raise ValueError("box basis must be orthonormal")
    if np.any(a <= 0):
        raise ValueError("box half-lengths must be positive")
    G = a[:, None] * U
    normals = np.vstack([U, -U])
    offsets = np.concatenate([a, a])
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    verts = signs @ G
    return ConvexBody("box", verts, normals, offsets, generators=G,
                      source={"basis": U.tolist(), "alphas": a.tolist()})


def cube(lo, hi, n):
    """Axis-aligned cube [lo, hi]^n as a vertex polytope."""
    pts = np.array(list(itertools.product((lo, hi), repeat=n)), dtype=float)
    return vpolytope(pts)


def body_from_dict(data):
    kind = data.get("type")
    if kind == "vpolytope":
        return vpolytope(data["vertices"])
    if kind == "hpolytope":
        return hpolytope(data["normals"], data["offsets"])
    if kind == "zonotope":
        return zonotope(data["generators"])
    if kind == "box":
        return box(data["basis"], data["alphas"])
    if kind == "aabb":
        lo = np.asarray(data["lo"], dtype=float)
        hi = np.asarray(data["hi"], dtype=float)
        if lo.shape != hi.shape or np.any(hi <= lo):
            raise ValueError("aabb needs lo < hi componentwise")
        return vpolytope(np.array(list(itertools.product(*zip(lo, hi)))))
    raise ValueError(f"unknown body type {kind!r}")


def _zonotope_planes(G):
    m, n = G.shape
    if n == 1:
        h = float(np.abs(G[:, 0]).sum())
        return np.array([[1.0], [-1.0]]), np.array([h, h])
    normals = []
    for idx in itertools.combinations(range(m), n - 1):
        nu = _normal_of(G[list(idx)])
        size = np.linalg.norm(nu)
        scale = np.prod(np.linalg.norm(G[list(idx)], axis=1))
        if size <= 1e-10 * scale:
            continue
        nu = canonical_sign(nu / size)
        if not any(np.max(np.abs(nu - other)) <= 1e-9 for other in normals):
            normals.append(nu)
    normals = np.array(normals)
    h = np.abs(G @ normals.T).sum(axis=0)
    return np.vstack([normals, -normals]), np.concatenate([h, h])


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def contains(K, x, tol=MEMBERSHIP_TOL):
    """Membership test with an additive tolerance on halfspace residuals."""
    x = np.asarray(x, dtype=float)
    resid = x @ K.normals.T - K.offsets
    return np.all(resid <= tol, axis=-1)


def support_function(K, u):
    """h_K(u) = max over K of <x, u>."""
    u = np.asarray(u, dtype=float)
    if K.is_zonotope:
        return np.abs(u @ K.generators.T).sum(axis=-1)
    return (u @ K.vertices.T).max(axis=-1)


def scale(K, t):
    """The dilate tK, in the same representation."""
    t = float(t)
    if t <= 0:
        raise ValueError("scale factor must be positive")
    if K.kind == "zonotope":
        return zonotope(t * K.generators)
    if K.kind == "box":
        return box(K.source["basis"], t * np.asarray(K.source["alphas"]))
    if K.kind == "hpolytope":
        return hpolytope(K.source["normals"], t * np.asarray(K.source["offsets"]))
    return ConvexBody("vpolytope", t * K.vertices, K.normals, t * K.offsets)


def minkowski_sum(A, B):
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    pts = (A.vertices[:, None, :] + B.vertices[None, :, :]).reshape(-1, A.dim)
    return vpolytope(pts)


def minkowski_combination(lam, A, B):
    """lam A + (1 - lam) B in vertex form."""
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    if lam == 1.0:
        return A
    if lam == 0.0:
        return B
    pts = (lam * A.vertices[:, None, :] + (1 - lam) * B.vertices[None, :, :]).reshape(-1, A.dim)
    return vpolytope(pts)


def add_segment(K, u, eps):
    """K + eps [-u, u] in vertex form."""
    eps = float(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if eps == 0.0:
        return K
    u = np.asarray(u, dtype=float)
    pts = np.vstack([K.vertices + eps * u, K.vertices - eps * u])
    return vpolytope(pts)


def segment(u):
    """The segment [-u, u] as a (degenerate in n > 1) vertex set."""
    u = np.asarray(u, dtype=float)
    return np.vstack([-u, u])


# ---------------------------------------------------------------------------
# faces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A flat (n-1)-dimensional convex polygon embedded in R^n.

    Points are ``origin + tangent @ y`` for ``y`` in the hull of ``coords``.
    """

    origin: np.ndarray
    tangent: np.ndarray
    coords: np.ndarray
    normal: np.ndarray
    offset: float
    label: tuple = ()

    @property
    def vertices(self):
        return self.origin + self.coords @ self.tangent.T

    @property
    def dim(self):
        return self.tangent.shape[1]

    def area(self):
        """(n-1)-dimensional volume."""
        k = self.dim
        if k == 0:
            return 1.0
        if k == 1:
            return float(np.ptp(self.coords[:, 0]))
        return float(ConvexHull(self.coords).volume)


def make_face(normal, offset, points, label=()):
    """Face on the plane <normal, x> = offset spanned by the given points."""
    normal = np.asarray(normal, dtype=float)
    origin = offset * normal
    T = orthonormal_complement(normal)
    y = (np.asarray(points, dtype=float) - origin) @ T
    if T.shape[1] >= 2:
        y = y[ConvexHull(y).vertices]
    elif T.shape[1] == 1:
        y = np.array([[y[:, 0].min()], [y[:, 0].max()]])
    else:
        y = np.zeros((1, 0))
    return Face(_frozen(origin), _frozen(T), _frozen(y), _frozen(normal), float(offset), label)


def facets(K):
    """All facets of a polytope, one per halfspace plane."""
    if K.is_zonotope:
        return zonotope_facets(K)
    out = []
    tol = 1e-9 * max(1.0, float(np.abs(K.offsets).max()))
    for i, (nu, h) in enumerate(zip(K.normals, K.offsets)):
        on = np.abs(K.vertices @ nu - h) <= tol
        if on.sum() < K.dim:
            continue
        out.append(make_face(nu, h, K.vertices[on], label=(i,)))
    return out


def zonotope_facets(Z):
    """Facets of a zonotope by enumeration of (n-1)-subsets of generators.

    Each facet is ``c + sum_{j in J} [-v_j, v_j]`` with ``J`` the generators
    parallel to the facet plane and ``c = sum_{i not in J} sign(<v_i, nu>) v_i``.
    """
    G = Z.generators
    if G is None:
        raise ValueError("not a zonotope")
    m, n = G.shape
    if np.linalg.matrix_rank(G) < n:
        raise DegenerateBodyError("generators do not span R^n")
    if n > MAX_DIM or m > MAX_GENERATORS:
        raise ValueError(f"facet enumeration limited to n <= {MAX_DIM}, m <= {MAX_GENERATORS}")
    out = []
    for nu, h in zip(Z.normals, Z.offsets):
        dots = G @ nu
        scale = np.linalg.norm(G, axis=1)
        inplane = np.abs(dots) <= 1e-10 * scale
        center = (np.sign(dots[~inplane])[:, None] * G[~inplane]).sum(axis=0)
        J = G[inplane]
        signs = np.array(list(itertools.product((-1.0, 1.0), repeat=len(J))))
        pts = center + (signs @ J if len(J) else np.zeros((1, n)))
        out.append(make_face(nu, h, pts, label=tuple(np.flatnonzero(inplane).tolist())))
    return out


def parallelepiped_face(basis, alphas, i):
    """The face {alpha_i u_i + sum_{j != i} beta_j u_j : |beta_j| <= alpha_j}."""
    U = np.asarray(basis, dtype=float)
    a = np.asarray(alphas, dtype=float)
    n = U.shape[0]
    others = [j for j in range(n) if j != i]
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=n - 1)))
    coords = signs * a[others]
    T = U[others].T
    origin = a[i] * U[i]
    if n - 1 >= 2:
        coords = coords[ConvexHull(coords).vertices]
    elif n - 1 == 1:
        coords = np.array([[-a[others][0]], [a[others][0]]])
    else:
        coords = np.zeros((1, 0))
    return Face(_frozen(origin), _frozen(T.reshape(n, n - 1)), _frozen(coords),
                _frozen(U[i]), float(a[i]), (i,))


# ---------------------------------------------------------------------------
# triangulation and projection
# ---------------------------------------------------------------------------

def _simplex_volumes(simplices):
    k = simplices.shape[2]
    if k == 0:
        return np.ones(len(simplices))
    edges = simplices[:, 1:, :] - simplices[:, :1, :]
    return np.abs(np.linalg.det(edges)) / factorial(k)


def triangulate_points(points):
    """Simplices (S, k+1, k) with disjoint interiors covering conv(points)."""
    points = np.asarray(points, dtype=float)
    k = points.shape[1]
    if k == 0:
        return points[:1][None, :, :]
    if k == 1:
        lo, hi = points[:, 0].min(), points[:, 0].max()
        return np.array([[[lo], [hi]]])
    tri = Delaunay(points, qhull_options="Qt Qbb Qc Qz Q12" if k > 4 else "Qt Qbb Qc Qz")
    simp = points[tri.simplices]
    vol = _simplex_volumes(simp)
    return simp[vol > DEGENERACY_TOL * max(vol.max(), 1e-300)]


def triangulate(K):
    """Triangulate a body; the simplices' total volume equals the hull volume."""
    try:
        return triangulate_points(K.vertices)
    except QhullError as exc:
        raise DegenerateBodyError(f"cannot triangulate: {exc}") from None


def project_body(K, u):
    """Orthogonal projection of K onto u-perp, in an orthonormal frame of u-perp.

    The result is an (n-1)-dimensional body whose ``embedding`` is
    ``(zeros(n), T)`` with ``T`` the frame; zonotopes project to zonotopes.
    """
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    if K.dim < 2:
        raise ValueError("cannot project a one-dimensional body")
    if K.embedding is not None:
        raise ValueError("body is already embedded in a hyperplane")
    T = orthonormal_complement(u)
    if K.is_zonotope:
        G = K.generators @ T
        G = G[np.linalg.norm(G, axis=1) > 1e-12 * np.linalg.norm(K.generators, axis=1).max()]
        P = zonotope(G)
    else:
        verts, normals, offsets = hull_halfspaces(K.vertices @ T)
        P = ConvexBody("vpolytope", verts, normals, offsets)
    P.embedding = (np.zeros(K.dim), T)
    return P
