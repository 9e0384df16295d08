"""Grundmann-Moeller rules on simplices and Gauss-Legendre on [0, 1]."""

import itertools
import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def grundmann_moeller(s, dim):
    """Grundmann-Moeller rule of index ``s`` on the ``dim``-simplex.

    Returns ``(bary, weights)`` with barycentric nodes of shape
    ``(Q, dim + 1)`` and weights normalised to sum to one, so that
    ``vol(S) * sum(w * f(nodes))`` approximates the integral over ``S``.
    The rule is exact for polynomials of total degree ``2 s + 1``.
    """
    if s < 0:
        raise ValueError("rule index must be nonnegative")
    if dim == 0:
        return np.ones((1, 1)), np.ones(1)
    d = 2 * s + 1
    acc = {}
    for i in range(s + 1):
        w = ((-1) ** i * 2.0 ** (-2 * s) * (d + dim - 2 * i) ** d
             / math.factorial(i) / math.factorial(d + dim - i))
        den = d + dim - 2 * i
        for beta in _compositions(s - i, dim + 1):
            node = tuple((2 * b + 1) / den for b in beta)
            acc[node] = acc.get(node, 0.0) + w
    bary = np.array(list(acc.keys()))
    weights = np.array(list(acc.values())) * math.factorial(dim)
    bary.setflags(write=False)
    weights.setflags(write=False)
    return bary, weights


def _compositions(total, parts):
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cut:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 1 - prev - 1)
        yield tuple(out)


def rule_index_for(order):
    """Smallest GM index whose exactness degree reaches ``order``."""
    return max(1, math.ceil((order - 1) / 2))


@lru_cache(maxsize=None)
def gauss_legendre_unit(npts):
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(npts)
    return (x + 1.0) / 2.0, w / 2.0
