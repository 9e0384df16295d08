"""Hot numeric kernels with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and the environment
variable ``HOMOCONE_DISABLE_NUMBA`` is unset (or ``0``).  Both paths expose
the same three functions:

``enumerate_vertices(A, b, combos, tol)``
    brute-force vertex enumeration of ``{y : A y <= b}``.
``simplex_rule_sums(simplices, bary, weights, W, c, expo)``
    per-simplex quadrature of ``(min_i (c_i + W_i . y))_+ ** expo``.
``welford_chunk(U, lo, hi, A, b, W, c, expo, tol)``
    count/mean/M2 of the rejection-sampling estimator over one chunk.
"""

import os

import numpy as np

_FLAG = os.environ.get("HOMOCONE_DISABLE_NUMBA", "0").strip().lower()
USE_NUMBA = _FLAG in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    USE_NUMBA = False


def _power_min(vals, expo):
    # vals: (..., r) values of the linear forms
    m = vals.min(axis=-1)
    out = np.zeros_like(m)
    pos = m > 0.0
    out[pos] = m[pos] ** expo
    return out


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

def enumerate_vertices_numpy(A, b, combos, tol):
    k = A.shape[1]
    if combos.shape[0] == 0:
        return np.empty((0, k))
    M = A[combos]                      # (C, k, k)
    rhs = b[combos]                    # (C, k)
    scale = np.abs(M).max(axis=(1, 2)) ** k
    det = np.linalg.det(M)
    ok = np.abs(det) > 1e-12 * np.maximum(scale, 1e-300)
    if not ok.any():
        return np.empty((0, k))
    pts = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
    resid = pts @ A.T - b
    feas = (resid <= tol).all(axis=1)
    return pts[feas]


def simplex_rule_sums_numpy(simplices, bary, weights, W, c, expo):
    k = simplices.shape[2]
    nodes = np.einsum("qv,svk->sqk", bary, simplices)
    vals = nodes @ W.T + c                             # (S, Q, r)
    f = _power_min(vals, expo)
    if k == 0:
        vol = np.ones(simplices.shape[0])
    else:
        edges = simplices[:, 1:, :] - simplices[:, :1, :]
        vol = np.abs(np.linalg.det(edges)) / _factorial(k)
    return vol * (f @ weights)


def welford_chunk_numpy(U, lo, hi, A, b, W, c, expo, tol):
    pts = lo + U * (hi - lo)
    box = float(np.prod(hi - lo))
    inside = ((pts @ A.T - b) <= tol).all(axis=1)
    vals = np.where(inside, _power_min(pts @ W.T + c, expo) * box, 0.0)
    n = vals.shape[0]
    mean = vals.mean() if n else 0.0
    m2 = float(((vals - mean) ** 2).sum())
    return n, float(mean), m2


def _factorial(k):
    out = 1.0
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if numba is not None:

    @numba.njit(cache=True)
    def _solve_small(M, rhs, out):
        # Gaussian elimination with partial pivoting; returns False if singular.
        k = M.shape[0]
        a = M.copy()
        r = rhs.copy()
        scale = 0.0
        for i in range(k):
            for j in range(k):
                v = abs(a[i, j])
                if v > scale:
                    scale = v
        if scale == 0.0:
            return False
        for col in range(k):
            piv = col
            best = abs(a[col, col])
            for row in range(col + 1, k):
                v = abs(a[row, col])
                if v > best:
                    best = v
                    piv = row
            if best <= 1e-12 * scale:
                return False
            if piv != col:
                for j in range(k):
                    tmp = a[col, j]
                    a[col, j] = a[piv, j]
                    a[piv, j] = tmp
                tmp = r[col]
                r[col] = r[piv]
                r[piv] = tmp
            for row in range(col + 1, k):
                f = a[row, col] / a[col, col]
                for j in range(col, k):
                    a[row, j] -= f * a[col, j]
                r[row] -= f * r[col]
        for i in range(k - 1, -1, -1):
            s = r[i]
            for j in range(i + 1, k):
                s -= a[i, j] * out[j]
            out[i] = s / a[i, i]
        return True

    @numba.njit(cache=True)
    def enumerate_vertices_numba(A, b, combos, tol):
        m, k = A.shape
        nc = combos.shape[0]
        buf = np.empty((nc, k))
        count = 0
        M = np.empty((k, k))
        rhs = np.empty(k)
        y = np.empty(k)
        for ci in range(nc):
            for i in range(k):
                row = combos[ci, i]
                for j in range(k):
                    M[i, j] = A[row, j]
                rhs[i] = b[row]
            if not _solve_small(M, rhs, y):
                continue
            feasible = True
            for row in range(m):
                s = 0.0
                for j in range(k):
                    s += A[row, j] * y[j]
                if s - b[row] > tol:
                    feasible = False
                    break
            if feasible:
                for j in range(k):
                    buf[count, j] = y[j]
                count += 1
        return buf[:count].copy()

    @numba.njit(cache=True)
    def simplex_rule_sums_numba(simplices, bary, weights, W, c, expo):
        ns, nv, k = simplices.shape
        nq = bary.shape[0]
        r = W.shape[0]
        out = np.empty(ns)
        fact = 1.0
        for i in range(2, k + 1):
            fact *= i
        edges = np.empty((k, k))
        y = np.empty(k)
        for s in range(ns):
            if k == 0:
                vol = 1.0
            else:
                for i in range(k):
                    for j in range(k):
                        edges[i, j] = simplices[s, i + 1, j] - simplices[s, 0, j]
                vol = abs(np.linalg.det(edges)) / fact
            acc = 0.0
            for q in range(nq):
                for j in range(k):
                    t = 0.0
                    for v in range(nv):
                        t += bary[q, v] * simplices[s, v, j]
                    y[j] = t
                mn = np.inf
                for i in range(r):
                    t = c[i]
                    for j in range(k):
                        t += W[i, j] * y[j]
                    if t < mn:
                        mn = t
                if mn > 0.0:
                    acc += weights[q] * mn ** expo
            out[s] = vol * acc
        return out

    @numba.njit(cache=True)
    def _welford_chunk_numba(U, lo, hi, A, b, W, c, expo, tol):
        n, dim = U.shape
        m = A.shape[0]
        r = W.shape[0]
        box = 1.0
        for j in range(dim):
            box *= hi[j] - lo[j]
        x = np.empty(dim)
        mean = 0.0
        m2 = 0.0
        for s in range(n):
            for j in range(dim):
                x[j] = lo[j] + U[s, j] * (hi[j] - lo[j])
            inside = True
            for row in range(m):
                t = 0.0
                for j in range(dim):
                    t += A[row, j] * x[j]
                if t - b[row] > tol:
                    inside = False
                    break
            val = 0.0
            if inside:
                mn = np.inf
                for i in range(r):
                    t = c[i]
                    for j in range(dim):
                        t += W[i, j] * x[j]
                    if t < mn:
                        mn = t
                if mn > 0.0:
                    val = mn ** expo * box
            delta = val - mean
            mean += delta / (s + 1)
            m2 += delta * (val - mean)
        return mean, m2

    def welford_chunk_numba(U, lo, hi, A, b, W, c, expo, tol):
        mean, m2 = _welford_chunk_numba(U, lo, hi, A, b, W, c, expo, tol)
        return U.shape[0], float(mean), float(m2)


if USE_NUMBA:
    enumerate_vertices = enumerate_vertices_numba
    simplex_rule_sums = simplex_rule_sums_numba
    welford_chunk = welford_chunk_numba
else:
    enumerate_vertices = enumerate_vertices_numpy
    simplex_rule_sums = simplex_rule_sums_numpy
    welford_chunk = welford_chunk_numpy


def backend():
    """Name of the active kernel backend (``"numba"`` or ``"numpy"``)."""
    return "numba" if USE_NUMBA else "numpy"
