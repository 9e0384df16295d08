"""Concave, homogeneous densities supported on convex cones.

Both built-in families have the form ``g(x) = (min_i <x, theta_i>)_+ ** (1/p)``;
``DirectionalPower`` is the single-form case.  ``g ** p`` is then concave and
1-homogeneous on its support, so ``g`` is p-concave and (1/p)-homogeneous.
"""

import numpy as np

from .report import CheckReport

UNIT_TOL = 1e-12


class Density:
    """Base class: ``g(x) = (min_i <x, forms[i]>)_+ ** (1/p)``."""

    kind = "abstract"

    def __init__(self, forms, p):
        forms = np.array(forms, dtype=float, ndmin=2)
        if forms.ndim != 2 or forms.shape[0] < 1:
            raise ValueError("need at least one linear form")
        if not np.all(np.isfinite(forms)):
            raise ValueError("linear forms must be finite")
        if np.any(np.linalg.norm(forms, axis=1) == 0.0):
            raise ValueError("linear forms must be nonzero")
        p = float(p)
        if not (np.isfinite(p) and p > 0.0):
            raise ValueError(f"p must be a finite positive real, got {p!r}")
        # exact duplicates would be counted twice when splitting by active form
        _, first = np.unique(forms, axis=0, return_index=True)
        forms = forms[np.sort(first)]
        forms.setflags(write=False)
        self.forms = forms
        self.p = p

    @property
    def dim(self):
        return self.forms.shape[1]

    @property
    def exponent(self):
        """Homogeneity degree ``1/p`` of the density."""
        return 1.0 / self.p

    def eval(self, x):
        """Evaluate g at a point or an array of points (last axis = coordinates)."""
        x = np.asarray(x, dtype=float)
        m = (x @ self.forms.T).min(axis=-1)
        pos = m > 0.0
        out = np.zeros_like(m, dtype=float)
        out[pos] = m[pos] ** self.exponent
        return out if out.ndim else float(out)

    __call__ = eval

    def eval_symmetrized(self, x):
        """g(x) + g(-x)."""
        x = np.asarray(x, dtype=float)
        return self.eval(x) + self.eval(-x)

    def segment_meets_support(self, u):
        """Whether [-u, u] meets the open support cone {g > 0}."""
        return bool(self.eval_symmetrized(u) > 0.0)

    def interior_direction(self):
        """A unit vector inside the support cone, or None if the cone is empty."""
        from scipy.optimize import linprog

        n = self.dim
        # maximise s subject to <x, theta_i> >= s, |x|_inf <= 1
        cost = np.zeros(n + 1)
        cost[-1] = -1.0
        A_ub = np.hstack([-self.forms, np.ones((self.forms.shape[0], 1))])
        res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(self.forms.shape[0]),
                      bounds=[(-1, 1)] * n + [(None, 1)], method="highs")
        if res.status != 0 or -res.fun <= 1e-12:
            return None
        x = res.x[:n]
        return x / np.linalg.norm(x)

    def to_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}(forms={self.forms.tolist()}, p={self.p})"


class DirectionalPower(Density):
    """``g(x) = <x, theta>_+ ** (1/p)`` for a unit vector theta."""

    kind = "directional_power"

    def __init__(self, theta, p):
        theta = np.asarray(theta, dtype=float)
        if theta.ndim != 1:
            raise ValueError("theta must be a vector")
        if abs(np.linalg.norm(theta) - 1.0) > UNIT_TOL:
            raise ValueError("theta must have unit norm")
        super().__init__(theta[None, :], p)

    @property
    def theta(self):
        return self.forms[0]

    def to_dict(self):
        return {"type": self.kind, "theta": self.theta.tolist(), "p": self.p}


class MinLinearPower(Density):
    """``g(x) = (min_i <x, theta_i>)_+ ** (1/p)``."""

    kind = "min_linear_power"

    def __init__(self, thetas, p):
        super().__init__(thetas, p)

    @property
    def thetas(self):
        return self.forms

    def to_dict(self):
        return {"type": self.kind, "thetas": self.forms.tolist(), "p": self.p}


def density_from_dict(data):
    kind = data.get("type")
    if kind == "directional_power":
        return DirectionalPower(data["theta"], data["p"])
    if kind == "min_linear_power":
        return MinLinearPower(data["thetas"], data["p"])
    raise ValueError(f"unknown density type {kind!r}")


def _support_samples(d, count, rng):
    direction = d.interior_direction()
    if direction is None:
        return np.empty((0, d.dim))
    out = []
    total = 0
    for _ in range(200):
        x = direction + rng.normal(size=(4 * count, d.dim))
        x = x[d.eval(x) > 0.0]
        out.append(x)
        total += len(x)
        if total >= count:
            break
    return np.concatenate(out)[:count]


def check_homogeneity(d, sample_count=1000, scales=(0.5, 2.0, 3.0), tol=1e-10, seed=0):
    """Sample points and scales, compare g(a x) with a^(1/p) g(x)."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(sample_count, d.dim))
    worst = 0.0
    for a in scales:
        a = float(a)
        ref = a ** d.exponent * d.eval(x)
        got = d.eval(a * x)
        viol = np.abs(got - ref) / np.maximum(1.0, ref)
        worst = max(worst, float(viol.max()))
    return CheckReport(
        name="homogeneity", lhs=worst, rhs=tol, residual=worst,
        passed=worst <= tol, tolerances={"rtol": tol},
        metadata={"density": d.to_dict(), "samples": sample_count,
                  "scales": [float(a) for a in scales], "seed": seed})


def check_p_concavity(d, sample_count=1000, tol=1e-10, seed=0):
    """Sample support pairs and weights, check the p-concavity inequality."""
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    pts = _support_samples(d, 2 * sample_count, rng)
    if len(pts) < 2:
        return CheckReport(name="p_concavity", hypothesis_ok=False,
                           reasons=["support cone is empty"], passed=False)
    half = len(pts) // 2
    x, y = pts[:half], pts[half:2 * half]
    lam = rng.uniform(0.0, 1.0, size=half)[:, None]
    lhs = d.eval(lam * x + (1 - lam) * y)
    rhs = (lam[:, 0] * d.eval(x) ** d.p + (1 - lam[:, 0]) * d.eval(y) ** d.p) ** d.exponent
    margin = float((lhs - rhs).min())
    return CheckReport(
        name="p_concavity", lhs=margin, rhs=-tol, residual=margin,
        passed=margin >= -tol, tolerances={"atol": tol},
        metadata={"density": d.to_dict(), "samples": int(half), "seed": seed})
