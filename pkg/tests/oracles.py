"""Independent reference computations used by the tests."""

import itertools
import math

import numpy as np


def simplex_monomial(alpha):
    """Exact integral of prod x_i^alpha_i over the unit simplex {x >= 0, sum x <= 1}."""
    n = len(alpha)
    return math.prod(math.factorial(a) for a in alpha) / math.factorial(sum(alpha) + n)


def simplex_linear_power(vertices, theta, a):
    """Integral of <x, theta>^a over a simplex lying in {<x, theta> > 0}.

    Hermite-Genocchi: the integral equals n! |S| times the divided difference
    of F(t) = t^(a+n) / ((a+1)...(a+n)) at the vertex values, assumed distinct.
    """
    V = np.asarray(vertices, dtype=float)
    n = V.shape[1]
    vol = abs(np.linalg.det(V[1:] - V[0])) / math.factorial(n)
    ell = V @ np.asarray(theta, dtype=float)
    denom = math.prod(a + k for k in range(1, n + 1))
    dd = 0.0
    for i in range(n + 1):
        prod = math.prod(ell[i] - ell[j] for j in range(n + 1) if j != i)
        dd += ell[i] ** (a + n) / denom / prod
    return math.factorial(n) * vol * dd


def zonotope_volume(G):
    """2^n sum over n-subsets of |det|."""
    G = np.asarray(G, dtype=float)
    n = G.shape[1]
    return 2.0 ** n * sum(abs(np.linalg.det(G[list(c)]))
                          for c in itertools.combinations(range(len(G)), n))


def naive_projection_family(vectors, n, tol=1e-9):
    """Literal iterated closure with plain Python loops and sign-free dedupe."""
    def key_in(v, pool):
        return any(min(np.abs(v - w).max(), np.abs(v + w).max()) < tol for w in pool)

    level = [np.asarray(v, dtype=float) for v in vectors]
    family = []
    for v in level:
        if not key_in(v, family):
            family.append(v)
    for _ in range(n - 1):
        nxt = []
        for ui in level:
            for uj in level:
                w = ui - (ui @ uj) * uj
                norm = np.linalg.norm(w)
                if norm <= tol:
                    continue
                w = w / norm
                if not key_in(w, nxt):
                    nxt.append(w)
        for v in nxt:
            if not key_in(v, family):
                family.append(v)
        level = nxt
    return family
