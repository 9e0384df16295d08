"""Both sides of each inequality and identity, evaluated on concrete instances.

Every check returns a :class:`~homocone.report.CheckReport`.  ``ratio`` is
always oriented so that the proven statement reads ``ratio >= 1``; an
inequality passes when ``ratio >= 1 - slack``.  Instances violating a
hypothesis yield ``hypothesis_ok=False`` reports instead of exceptions.
"""

import math

import numpy as np

from .bodies import (box, facets, minkowski_combination, parallelepiped_face, project_body,
                     zonotope)
from .frames import WeightedFrame, is_isotropic, projection_family
from .measure import homogeneity_exponent, integrate_region, measure_body, measure_face
from .mixed import (mixed_measure_facet_sum, mixed_measure_fd, mixed_measure_segment,
                    projection_functional)
from .report import CheckReport, skipped

INEQUALITY_SLACK = 1e-4
IDENTITY_RTOL = 1e-3
ROUTE_RTOL = 1e-6
MIXED_ROUTE_RTOL = 1e-4
PYRAMID_RTOL = 1e-6


def _inequality(name, big, small, slack, **extra):
    """Report for a statement ``big >= small``; lhs/rhs are filled by the caller."""
    if small > 0:
        ratio = big / small
    else:
        ratio = math.inf if big > 0 else 1.0
    return ratio, ratio >= 1.0 - slack


def _log_ratio_report(name, log_lhs, log_rhs, slack, tolerances=None, **metadata):
    """lhs <= rhs checked in log space (rhs/lhs may span many decades)."""
    log_ratio = log_rhs - log_lhs
    ratio = math.exp(min(log_ratio, 700.0))
    lhs = math.exp(min(log_lhs, 700.0)) if math.isfinite(log_lhs) else 0.0
    rhs = math.exp(min(log_rhs, 700.0))
    tol = {"slack": slack}
    tol.update(tolerances or {})
    return CheckReport(name=name, lhs=lhs, rhs=rhs, ratio=ratio, residual=1.0 - ratio,
                       passed=ratio >= 1.0 - slack, tolerances=tol, metadata=metadata)


def _is_orthonormal(U, tol=1e-9):
    U = np.asarray(U, dtype=float)
    return U.shape[0] == U.shape[1] and np.max(np.abs(U @ U.T - np.eye(len(U)))) <= tol


# ---------------------------------------------------------------------------
# concavity of the measure and the generalized Minkowski inequality
# ---------------------------------------------------------------------------

def check_borell(d, E, F, lam, slack=INEQUALITY_SLACK):
    """mu(lam E + (1-lam) F) >= (lam mu(E)^q + (1-lam) mu(F)^q)^(1/q)."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        return skipped("borell", ["lambda outside [0, 1]"], lam=lam)
    q = homogeneity_exponent(d.dim, d.p).q
    mix = measure_body(d, minkowski_combination(lam, E, F)).value
    mE = measure_body(d, E).value
    mF = measure_body(d, F).value
    bound = (lam * mE ** q + (1 - lam) * mF ** q) ** (1.0 / q)
    ratio, ok = _inequality("borell", mix, bound, slack)
    return CheckReport(name="borell", lhs=mix, rhs=bound, ratio=ratio, residual=1.0 - ratio,
                       passed=ok, tolerances={"slack": slack},
                       metadata={"lambda": lam, "mu_E": mE, "mu_F": mF, "q": q})


def check_minkowski_first(d, A, B, slack=INEQUALITY_SLACK):
    """mu(A)^(1-q) mu(B)^q <= q mu_1(A, B), mu_1 by the facet sum."""
    q = homogeneity_exponent(d.dim, d.p).q
    mA = measure_body(d, A).value
    mB = measure_body(d, B).value
    mixed = mixed_measure_facet_sum(d, A, B).value
    lhs = mA ** (1 - q) * mB ** q
    rhs = q * mixed
    ratio, ok = _inequality("minkowski_first", rhs, lhs, slack)
    return CheckReport(name="minkowski_first", lhs=lhs, rhs=rhs, ratio=ratio,
                       residual=1.0 - ratio, passed=ok, tolerances={"slack": slack},
                       metadata={"mu_A": mA, "mu_B": mB, "mixed": mixed, "q": q})


# ---------------------------------------------------------------------------
# Loomis-Whitney type bounds
# ---------------------------------------------------------------------------

def face_bound_rhs(d, basis, alphas, i):
    """Lower bound for the measure of the face at alpha_i u_i of the box sum alpha_j [-u_j, u_j]."""
    U = np.asarray(basis, dtype=float)
    a = np.asarray(alphas, dtype=float)
    n, p = len(U), d.p
    gp = d.eval_symmetrized(U) ** p
    total = gp.sum()
    expo = 1.0 + gp / (p * total)
    log_rhs = (n * math.log(p * n / (p * n + 1.0)) + math.log(expo[i])
               + math.log(total) / p - math.log(a[i]) + float(np.sum(expo * np.log(a))))
    return math.exp(log_rhs)


def check_face_bound(d, basis, alphas, i, slack=INEQUALITY_SLACK):
    U = np.asarray(basis, dtype=float)
    a = np.asarray(alphas, dtype=float)
    reasons = []
    if not _is_orthonormal(U):
        reasons.append("basis is not orthonormal")
    elif not all(d.segment_meets_support(u) for u in U):
        reasons.append("some [-u_j, u_j] misses supp(g)")
    elif d.eval(U[i]) <= 0.0:
        reasons.append("u_i is not in supp(g)")
    if np.any(a <= 0):
        reasons.append("half-lengths must be positive")
    if reasons:
        return skipped("face_bound", reasons, i=int(i))
    face = measure_face(d, parallelepiped_face(U, a, i)).value
    rhs = face_bound_rhs(d, U, a, i)
    ratio, ok = _inequality("face_bound", face, rhs, slack)
    return CheckReport(name="face_bound", lhs=face, rhs=rhs, ratio=ratio, residual=1.0 - ratio,
                       passed=ok, tolerances={"slack": slack},
                       metadata={"i": int(i), "alphas": a.tolist()})


def _projection_data(d, K, directions):
    out = [projection_functional(d, K, u) for u in directions]
    return (np.array([r.value for r in out]),
            max((r.discrepancy for r in out), default=0.0))


def lw_log_rhs(d, n, P, gtilde):
    """log of the right-hand side of the orthonormal-basis bound."""
    p = d.p
    gp = gtilde ** p
    total = gp.sum()
    expo = 1.0 + gp / (p * total)
    return ((n + 1.0 / p) * math.log(2.0) + n * math.log1p(1.0 / (p * n))
            - math.log(total) / p + float(np.sum(expo * np.log(P))))


def check_theorem_lw(d, K, basis, slack=INEQUALITY_SLACK):
    """mu(K)^(n+1/p-1) against the orthonormal-basis projection bound."""
    U = np.asarray(basis, dtype=float)
    n = K.dim
    if not _is_orthonormal(U) or len(U) != n:
        return skipped("theorem_lw", ["basis is not an orthonormal basis of R^n"])
    gt = d.eval_symmetrized(U)
    if np.any(gt <= 0.0):
        return skipped("theorem_lw", ["some [-u_i, u_i] misses supp(g)"],
                       gtilde=gt.tolist())
    mu = measure_body(d, K).value
    P, disc = _projection_data(d, K, U)
    log_lhs = (n + 1.0 / d.p - 1.0) * math.log(mu) if mu > 0 else -math.inf
    log_rhs = lw_log_rhs(d, n, P, gt) if np.all(P > 0) else -math.inf
    return _log_ratio_report("theorem_lw", log_lhs, log_rhs, slack, mu=mu,
                             projections=P.tolist(), gtilde=gt.tolist(),
                             projection_route_discrepancy=disc)


def zonotope_bound_rhs(d, frame, alphas, inf_gtilde):
    n, p = frame.dim, d.p
    c = frame.weights
    a = np.asarray(alphas, dtype=float)
    log_rhs = (math.log(inf_gtilde)
               + sum(math.log(k / (k + 1.0 / p)) for k in range(1, n + 1))
               + float(np.sum(c * (1.0 + 1.0 / (p * n)) * np.log(a / c))))
    return math.exp(log_rhs)


def _frame_hypotheses(d, frame, name):
    if not isinstance(frame, WeightedFrame) or not is_isotropic(frame):
        return None, ["frame is not isotropic"]
    fam = projection_family(frame)
    gt = d.eval_symmetrized(fam.members)
    if np.any(gt <= 0.0):
        return fam, ["some u in the projection family has [-u, u] missing supp(g)"]
    return fam, []


def check_zonotope_bound(d, frame, alphas, slack=INEQUALITY_SLACK):
    """mu(sum alpha_i [-u_i, u_i]) against the isotropic-frame lower bound."""
    fam, reasons = _frame_hypotheses(d, frame, "zonotope_bound")
    a = np.asarray(alphas, dtype=float)
    if np.any(a <= 0):
        reasons.append("alphas must be positive")
    if reasons:
        return skipped("zonotope_bound", reasons)
    inf_gt = float(d.eval_symmetrized(fam.members).min())
    Z = zonotope(a[:, None] * frame.vectors)
    mu = measure_body(d, Z).value
    rhs = zonotope_bound_rhs(d, frame, a, inf_gt)
    ratio, ok = _inequality("zonotope_bound", mu, rhs, slack)
    return CheckReport(name="zonotope_bound", lhs=mu, rhs=rhs, ratio=ratio,
                       residual=1.0 - ratio, passed=ok, tolerances={"slack": slack},
                       metadata={"inf_gtilde": inf_gt, "family_size": len(fam.members),
                                 "alphas": a.tolist()})


def ball_log_rhs(d, frame, P, inf_gtilde):
    n, p = frame.dim, d.p
    c = frame.weights
    return ((n + 1.0 / p) * math.log(2.0) - math.log(inf_gtilde)
            + sum(math.log1p(1.0 / (k * p)) for k in range(1, n + 1))
            + float(np.sum(c * (1.0 + 1.0 / (p * n)) * np.log(P))))


def check_theorem_ball(d, K, frame, slack=INEQUALITY_SLACK):
    """mu(K)^(n+1/p-1) against the isotropic-frame projection bound."""
    fam, reasons = _frame_hypotheses(d, frame, "theorem_ball")
    if not reasons and frame.dim != K.dim:
        reasons.append("frame and body dimensions differ")
    if reasons:
        return skipped("theorem_ball", reasons)
    n = K.dim
    inf_gt = float(d.eval_symmetrized(fam.members).min())
    mu = measure_body(d, K).value
    P, disc = _projection_data(d, K, frame.vectors)
    log_lhs = (n + 1.0 / d.p - 1.0) * math.log(mu) if mu > 0 else -math.inf
    log_rhs = ball_log_rhs(d, frame, P, inf_gt) if np.all(P > 0) else -math.inf
    return _log_ratio_report("theorem_ball", log_lhs, log_rhs, slack, mu=mu,
                             projections=P.tolist(), inf_gtilde=inf_gt,
                             family_size=len(fam.members),
                             projection_route_discrepancy=disc)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def _identity(name, lhs, rhs, rtol, extra_tol=0.0, **metadata):
    resid = abs(lhs - rhs) / max(abs(rhs), 1e-300) if rhs != 0 else abs(lhs)
    tol = max(rtol, extra_tol)
    return CheckReport(name=name, lhs=lhs, rhs=rhs, residual=resid, passed=resid <= tol,
                       tolerances={"rtol": rtol, "extra": extra_tol}, metadata=metadata)


def check_self_mixed(d, Z, rtol=IDENTITY_RTOL):
    """mu_1(Z, Z) (finite differences) equals mu(Z) / q."""
    q = homogeneity_exponent(Z.dim, d.p).q
    fd = mixed_measure_fd(d, Z, Z)
    mu = measure_body(d, Z).value
    return _identity("self_mixed", fd.value, mu / q, rtol, fd_error=fd.error_estimate,
                     fd_monotone=fd.monotone)


def check_linearity(d, K, E, F, t=2.0, rtol=IDENTITY_RTOL):
    """mu_1(K, E + tF) = mu_1(K, E) + t mu_1(K, F), each side by finite differences."""
    pts = (E.vertices[:, None, :] + t * F.vertices[None, :, :]).reshape(-1, K.dim)
    lhs = mixed_measure_fd(d, K, pts)
    mE = mixed_measure_fd(d, K, E)
    mF = mixed_measure_fd(d, K, F)
    rhs = mE.value + t * mF.value
    scale_ = max(abs(rhs), 1e-300)
    fd_err = (lhs.error_estimate + mE.error_estimate + t * mF.error_estimate) / scale_
    return _identity("linearity", lhs.value, rhs, rtol, fd_err, t=float(t))


def check_projection_routes(d, K, theta, rtol=ROUTE_RTOL):
    """Definition route of P_{mu,K} against the closed form."""
    r = projection_functional(d, K, theta)
    return _identity("projection_routes", r.definition_value, r.value, rtol,
                     scaling_residual=r.scaling_residual, theta=np.asarray(theta).tolist())


def check_mixed_routes(d, K, u, rtol=MIXED_ROUTE_RTOL):
    """Facet-sum and finite-difference values of mu_1(K, [-u, u])."""
    exact = mixed_measure_segment(d, K, u)
    fd = mixed_measure_fd(d, K, np.asarray(u, dtype=float))
    extra = fd.error_estimate / max(abs(exact.value), 1e-300)
    return _identity("mixed_routes", fd.value, exact.value, rtol, extra,
                     fd_table=fd.table, fd_monotone=fd.monotone)


def check_pyramid(d, K, rtol=PYRAMID_RTOL):
    """mu(K) = q sum_F h_F mu_{n-1}(F), h_F the signed distance of the facet plane."""
    q = homogeneity_exponent(K.dim, d.p).q
    total = sum(F.offset * measure_face(d, F).value for F in facets(K))
    mu = measure_body(d, K).value
    return _identity("pyramid", q * total, mu, rtol)


def check_measure_mc(d, K, samples=1_000_000, seed=0, sigmas=3.0):
    """Quadrature and Monte Carlo values of mu(K) agree within a few standard errors."""
    quad = measure_body(d, K)
    mc = measure_body(d, K, method="monte_carlo", samples=samples, seed=seed)
    se = math.hypot(mc.error_estimate, quad.error_estimate)
    gap = abs(quad.value - mc.value)
    return CheckReport(name="measure_mc", lhs=mc.value, rhs=quad.value,
                       residual=gap / se if se > 0 else (0.0 if gap == 0 else math.inf),
                       passed=gap <= sigmas * se if se > 0 else gap == 0,
                       tolerances={"sigmas": sigmas},
                       metadata={"mc_stderr": mc.error_estimate, "samples": mc.count,
                                 "seed": seed})


def check_projection_inequality(d, Z, u, slack=INEQUALITY_SLACK):
    """mu_1(Z, [-u, u]) >= integral of g over the projection of Z onto u-perp."""
    u = np.asarray(u, dtype=float)
    if not d.segment_meets_support(u):
        return skipped("projection_inequality", ["[-u, u] misses supp(g)"])
    mixed = mixed_measure_segment(d, Z, u).value
    P = project_body(Z, u)
    proj = measure_body(d, P).value
    ratio, ok = _inequality("projection_inequality", mixed, proj, slack)
    return CheckReport(name="projection_inequality", lhs=mixed, rhs=proj, ratio=ratio,
                       residual=1.0 - ratio, passed=ok, tolerances={"slack": slack},
                       metadata={"u": u.tolist()})


def check_monotonicity(d, u, sample_count=1000, seed=0, tol=1e-12):
    """g(w + t1 u) >= g(w + t2 u) for t1 >= t2 >= 0 whenever g(u) > 0."""
    u = np.asarray(u, dtype=float)
    if d.eval(u) <= 0.0:
        return skipped("monotonicity", ["u is not in supp(g)"])
    rng = np.random.default_rng(seed)
    w = rng.normal(size=(sample_count, d.dim)) * 2.0
    t = np.sort(rng.exponential(size=(sample_count, 2)), axis=1)
    hi = d.eval(w + t[:, 1:2] * u)
    lo = d.eval(w + t[:, 0:1] * u)
    margin = float((hi - lo).min())
    return CheckReport(name="monotonicity", lhs=margin, rhs=-tol, residual=margin,
                       passed=margin >= -tol, tolerances={"atol": tol},
                       metadata={"samples": sample_count, "seed": seed})


# ---------------------------------------------------------------------------
# the Lebesgue limit
# ---------------------------------------------------------------------------

class _SupportIndicator:
    """Indicator of the open support cone; the large-p limit of the densities."""

    exponent = 0.0
    p = math.inf

    def __init__(self, d):
        self.forms = d.forms

    @property
    def dim(self):
        return self.forms.shape[1]

    def eval(self, x):
        return ((np.asarray(x) @ self.forms.T).min(axis=-1) > 0).astype(float)


def _lebesgue(K, weight=None):
    """Volume of K (or of K within the support of ``weight``'s cone)."""
    if weight is None:
        return K.volume()
    return integrate_region(weight, np.zeros(K.dim), np.eye(K.dim), K.normals, K.offsets)[0]


def classical_lw_ratio(K, basis):
    """|K|^(n-1) / prod |K | u_i-perp|, equal to one for boxes aligned with the basis."""
    U = np.asarray(basis, dtype=float)
    n = K.dim
    vol = K.volume()
    proj = [project_body(K, u).volume() for u in U]
    return vol ** (n - 1) / float(np.prod(proj))


def lw_limit_ratio(d, K, basis):
    """Large-p limit of the orthonormal-basis ratio for a half-space-type density."""
    U = np.asarray(basis, dtype=float)
    n = K.dim
    ind = _SupportIndicator(d)
    vol = _lebesgue(K, ind)
    proj = []
    for u in U:
        total = 0.0
        for F in facets(K):
            w = abs(float(F.normal @ u))
            if w:
                _, A, b = _face_halfspaces(F)
                total += w * integrate_region(ind, F.origin, F.tangent, A, b)[0]
        proj.append(total / 2.0)
    return 2.0 ** n * float(np.prod(proj)) / vol ** (n - 1)


def _face_halfspaces(F):
    from .bodies import hull_halfspaces

    return hull_halfspaces(F.coords)


def lebesgue_limit_study(K, basis, p_list, theta, slack=INEQUALITY_SLACK):
    """Orthonormal-basis ratio for increasing p against its Lebesgue limit."""
    from .densities import DirectionalPower

    U = np.asarray(basis, dtype=float)
    theta = np.asarray(theta, dtype=float)
    n = K.dim
    if np.any(np.abs(U @ theta) <= 1e-12):
        return [skipped("lebesgue_limit", ["theta is orthogonal to a basis vector"])]
    classical = classical_lw_ratio(K, U)
    limit = lw_limit_ratio(DirectionalPower(theta, 1.0), K, U)
    out = []
    for p in p_list:
        d = DirectionalPower(theta, p)
        rep = check_theorem_lw(d, K, U, slack)
        rep.name = "lebesgue_limit"
        rep.metadata.update({
            "p": float(p),
            "constant": 2.0 ** (n + 1.0 / p) * (1.0 + 1.0 / (p * n)) ** n,
            "limit_ratio": limit,
            "gap_to_limit": abs(rep.ratio - limit) / limit,
            "classical_ratio": classical,
        })
        out.append(rep)
    return out
