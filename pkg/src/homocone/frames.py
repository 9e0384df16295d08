"""Weighted isotropic frames, their projection families and gamma tables."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .bodies import canonical_sign
from .report import CheckReport

ISOTROPY_TOL = 1e-9
DEGENERACY_TOL = 1e-9
DEDUPE_TOL = 1e-9


class InfeasibleFrameError(ValueError):
    """No nonnegative weights make the given vectors isotropic."""


@dataclass(frozen=True)
class WeightedFrame:
    vectors: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        U = np.array(self.vectors, dtype=float, ndmin=2)
        c = np.array(self.weights, dtype=float, ndmin=1)
        if c.shape != (U.shape[0],):
            raise ValueError("need one weight per vector")
        if np.max(np.abs(np.linalg.norm(U, axis=1) - 1.0)) > 1e-9:
            raise ValueError("frame vectors must be unit vectors")
        if np.any(c <= 0):
            raise ValueError("frame weights must be positive")
        U.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "vectors", U)
        object.__setattr__(self, "weights", c)

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return self.vectors.shape[0]

    def operator(self):
        """sum_i c_i u_i u_i^T."""
        return np.einsum("i,ij,ik->jk", self.weights, self.vectors, self.vectors)

    def to_dict(self):
        return {"vectors": self.vectors.tolist(), "weights": self.weights.tolist()}


def frame_from_dict(data):
    vectors = np.asarray(data["vectors"], dtype=float)
    weights = data.get("weights")
    if weights is None:
        weights = solve_weights(vectors)
    return WeightedFrame(vectors, weights)


def orthonormal_frame(basis):
    basis = np.asarray(basis, dtype=float)
    return WeightedFrame(basis, np.ones(len(basis)))


def regular_triple(angle=0.0):
    """Three unit vectors in R^2 spaced 120 degrees apart, weights 2/3."""
    phis = angle + np.deg2rad([90.0, 210.0, 330.0])
    U = np.column_stack([np.cos(phis), np.sin(phis)])
    return WeightedFrame(U, np.full(3, 2.0 / 3.0))


def verify_isotropic(F, tol=ISOTROPY_TOL):
    """Max-entry deviation of sum c_i u_i u_i^T from I_n, and |sum c_i - n|."""
    n = F.dim
    dev = float(np.max(np.abs(F.operator() - np.eye(n))))
    trace = float(abs(F.weights.sum() - n))
    worst = max(dev, trace)
    return CheckReport(
        name="isotropic", lhs=worst, rhs=tol, residual=worst,
        passed=worst <= tol, tolerances={"atol": tol},
        metadata={"operator_deviation": dev, "trace_deviation": trace, "m": len(F), "n": n})


def is_isotropic(F, tol=ISOTROPY_TOL):
    return verify_isotropic(F, tol).passed


def solve_weights(vectors, residual_tol=1e-8, min_weight=1e-10):
    """Positive weights c with sum c_i u_i u_i^T = I, by nonnegative least squares."""
    U = np.asarray(vectors, dtype=float)
    m, n = U.shape
    if m < n:
        raise InfeasibleFrameError("need at least n vectors")
    iu = np.triu_indices(n)
    # one column per vector: the upper triangle of u u^T
    A = np.stack([np.outer(u, u)[iu] for u in U], axis=1)
    target = np.eye(n)[iu]
    c, rnorm = nnls(A, target)
    if rnorm > residual_tol or np.any(c <= min_weight):
        raise InfeasibleFrameError(
            f"no positive isotropic weights (residual {rnorm:.3g}, min weight {c.min():.3g})")
    return c


def isotropic_position(vectors):
    """Map arbitrary spanning vectors to an isotropic frame.

    With ``S = sum v_i v_i^T``, the vectors ``S^{-1/2} v_i`` normalised, with
    weights ``|S^{-1/2} v_i|^2``, satisfy ``sum c_i u_i u_i^T = I``.
    """
    V = np.asarray(vectors, dtype=float)
    S = V.T @ V
    evals, evecs = np.linalg.eigh(S)
    if evals.min() <= 1e-12 * evals.max():
        raise InfeasibleFrameError("vectors do not span R^n")
    root = evecs @ np.diag(evals ** -0.5) @ evecs.T
    W = V @ root
    c = np.einsum("ij,ij->i", W, W)
    return WeightedFrame(W / np.sqrt(c)[:, None], c)


# ---------------------------------------------------------------------------
# projection family
# ---------------------------------------------------------------------------

@dataclass
class ProjectionFamily:
    levels: list
    members: np.ndarray
    skipped: list = field(default_factory=list)


def _sign_canonical_unique(vectors, tol=DEDUPE_TOL):
    out = []
    for v in vectors:
        v = canonical_sign(v, tol)
        if not any(np.max(np.abs(v - w)) <= tol for w in out):
            out.append(v)
    n = vectors.shape[1] if len(vectors) else 0
    return np.array(out).reshape(-1, n)


def _project_level(S, tol, level, skipped):
    out = []
    for i, ui in enumerate(S):
        for j, uj in enumerate(S):
            if i == j:
                continue
            w = ui - (ui @ uj) * uj
            size = np.linalg.norm(w)
            if size <= tol:
                skipped.append({"level": level, "i": i, "j": j, "norm": float(size)})
                continue
            out.append(w / size)
    if not out:
        return np.empty((0, S.shape[1]))
    return _sign_canonical_unique(np.array(out))


def projection_family(F, degeneracy_tol=DEGENERACY_TOL):
    """The set S u S^(1) u ... u S^(n-1) of iterated normalised projections.

    ``S^(1)`` holds ``(u_i - <u_i, u_j> u_j) / |...|`` for ordered pairs
    ``i != j``; pairs with a vanishing projection are skipped and logged.
    Deduplication identifies ``u`` with ``-u``.
    """
    vectors = F.vectors if isinstance(F, WeightedFrame) else np.asarray(F, dtype=float)
    n = vectors.shape[1]
    skipped = []
    levels = [_sign_canonical_unique(vectors)]
    for level in range(1, n):
        levels.append(_project_level(levels[-1], degeneracy_tol, level, skipped))
    members = _sign_canonical_unique(np.vstack(levels))
    return ProjectionFamily(levels, members, skipped)


def min_symmetrized(d, family):
    """inf over the family of g-tilde, the constant entering the Ball-type bound."""
    members = family.members if isinstance(family, ProjectionFamily) else family
    return float(d.eval_symmetrized(members).min())


# ---------------------------------------------------------------------------
# gamma table
# ---------------------------------------------------------------------------

@dataclass
class GammaTable:
    gamma: np.ndarray          # gamma[j, i] = |u_j - <u_i, u_j> u_i|
    weighted_sums: np.ndarray  # sum_i c_i gamma[j, i]^2, one per j


def gamma_table(F, tol=1e-9):
    """gamma_ji and the per-j identity sum_i c_i gamma_ji^2 = n - 1."""
    U, c = F.vectors, F.weights
    G = U @ U.T                                   # G[i, j] = <u_i, u_j>
    diff = U[:, None, :] - G[:, :, None] * U[None, :, :]   # [j, i] -> u_j - <u_j,u_i> u_i
    gamma = np.linalg.norm(diff, axis=-1)
    sums = (c[None, :] * gamma ** 2).sum(axis=1)
    resid = np.abs(sums - (F.dim - 1))
    closed = np.sqrt(np.clip(1.0 - G ** 2, 0.0, None))
    worst = float(resid.max())
    report = CheckReport(
        name="gamma_identity", lhs=float(sums.max()), rhs=float(F.dim - 1), residual=worst,
        passed=worst <= tol, tolerances={"atol": tol},
        metadata={"per_j_residual": resid.tolist(),
                  "closed_form_gap": float(np.max(np.abs(gamma ** 2 - closed ** 2)))})
    return GammaTable(gamma, sums), report
