"""Scenario configs, the check registry and the built-in instances."""

from dataclasses import dataclass, field

import numpy as np

from . import harness as H
from .bodies import ConvexBody, body_from_dict, box, cube, vpolytope, zonotope
from .densities import DirectionalPower, MinLinearPower, check_homogeneity, check_p_concavity, density_from_dict
from .frames import WeightedFrame, frame_from_dict, gamma_table, orthonormal_frame, regular_triple, verify_isotropic
from .measure import homogeneity_exponent
from .report import skipped

DEFAULT_TOLERANCES = {
    "slack": H.INEQUALITY_SLACK,
    "identity_rtol": H.IDENTITY_RTOL,
    "route_rtol": H.ROUTE_RTOL,
    "mixed_route_rtol": H.MIXED_ROUTE_RTOL,
    "pyramid_rtol": H.PYRAMID_RTOL,
    "frame_atol": 1e-9,
    "mc_sigmas": 3.0,
    "pointwise_atol": 1e-10,
}


class ConfigError(ValueError):
    """Malformed scenario or run configuration."""


@dataclass
class Scenario:
    name: str
    density: object
    body: ConvexBody = None
    second_body: ConvexBody = None
    zonotope: ConvexBody = None
    basis: np.ndarray = None
    frame: WeightedFrame = None
    alphas: np.ndarray = None
    checks: list = field(default_factory=list)
    options: dict = field(default_factory=dict)

    @property
    def p(self):
        return self.density.p

    @property
    def q(self):
        return homogeneity_exponent(self.density.dim, self.density.p).q

    def directions(self):
        if self.basis is not None:
            return np.asarray(self.basis)
        if self.frame is not None:
            return self.frame.vectors
        if self.zonotope is not None:
            G = self.zonotope.generators
            return G / np.linalg.norm(G, axis=1)[:, None]
        return np.eye(self.density.dim)

    def the_zonotope(self):
        if self.zonotope is not None:
            return self.zonotope
        if self.body is not None and self.body.is_zonotope:
            return self.body
        if self.alphas is not None and (self.frame is not None or self.basis is not None):
            U = self.frame.vectors if self.frame is not None else np.asarray(self.basis)
            return zonotope(np.asarray(self.alphas)[:, None] * U)
        return None

    def to_dict(self):
        out = {"name": self.name, "density": self.density.to_dict(), "checks": list(self.checks)}
        for key in ("body", "second_body", "zonotope", "frame"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val.to_dict()
        for key in ("basis", "alphas"):
            val = getattr(self, key)
            if val is not None:
                out[key] = np.asarray(val).tolist()
        if self.options:
            out["options"] = dict(self.options)
        return out


def scenario_from_dict(data, default_checks=()):
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    try:
        density = density_from_dict(data["density"])
        kw = {}
        for key in ("body", "second_body", "zonotope"):
            if key in data:
                kw[key] = body_from_dict(data[key])
        if "frame" in data:
            kw["frame"] = frame_from_dict(data["frame"])
        if "basis" in data:
            kw["basis"] = np.asarray(data["basis"], dtype=float)
        if "alphas" in data:
            kw["alphas"] = np.asarray(data["alphas"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"scenario {data.get('name', '?')!r}: {exc}") from None
    checks = list(data.get("checks", default_checks))
    sc = Scenario(name=str(data.get("name", "scenario")), density=density, checks=checks,
                  options=dict(data.get("options", {})), **kw)
    validate(sc)
    return sc


# ---------------------------------------------------------------------------
# check registry
# ---------------------------------------------------------------------------

def _needs(sc, *attrs):
    missing = []
    for a in attrs:
        if a == "zonotope":
            if sc.the_zonotope() is None:
                missing.append(a)
        elif getattr(sc, a) is None:
            missing.append(a)
    return missing


def _run_homogeneity(sc, tol, seed):
    return [check_homogeneity(sc.density, tol=tol["pointwise_atol"], seed=seed)]


def _run_p_concavity(sc, tol, seed):
    return [check_p_concavity(sc.density, tol=tol["pointwise_atol"], seed=seed)]


def _run_monotonicity(sc, tol, seed):
    out = []
    for u in sc.directions():
        u = u if sc.density.eval(u) > 0 else -u
        out.append(H.check_monotonicity(sc.density, u, seed=seed, tol=tol["pointwise_atol"]))
    return out


def _run_measure_mc(sc, tol, seed):
    samples = int(sc.options.get("mc_samples", 1_000_000))
    return [H.check_measure_mc(sc.density, sc.body, samples=samples, seed=seed,
                               sigmas=tol["mc_sigmas"])]


def _run_pyramid(sc, tol, seed):
    return [H.check_pyramid(sc.density, sc.body, tol["pyramid_rtol"])]


def _run_mixed_routes(sc, tol, seed):
    return [H.check_mixed_routes(sc.density, sc.body, u, tol["mixed_route_rtol"])
            for u in sc.directions()]


def _run_projection_routes(sc, tol, seed):
    return [H.check_projection_routes(sc.density, sc.body, u, tol["route_rtol"])
            for u in sc.directions()]


def _run_self_mixed(sc, tol, seed):
    return [H.check_self_mixed(sc.density, sc.the_zonotope(), tol["identity_rtol"])]


def _run_zonotope_expansion(sc, tol, seed):
    from .mixed import mixed_zonotope_expansion

    return [mixed_zonotope_expansion(sc.density, sc.body, sc.the_zonotope(), tol["identity_rtol"])]


def _run_linearity(sc, tol, seed):
    t = float(sc.options.get("t", 2.0))
    return [H.check_linearity(sc.density, sc.body, sc.second_body, sc.the_zonotope(), t,
                              tol["identity_rtol"])]


def _run_borell(sc, tol, seed):
    lam = float(sc.options.get("lambda", 0.5))
    return [H.check_borell(sc.density, sc.body, sc.second_body, lam, tol["slack"])]


def _run_minkowski_first(sc, tol, seed):
    return [H.check_minkowski_first(sc.density, sc.body, sc.second_body, tol["slack"])]


def _run_face_bound(sc, tol, seed):
    return [H.check_face_bound(sc.density, sc.basis, sc.alphas, i, tol["slack"])
            for i in range(len(sc.basis))]


def _run_zonotope_bound(sc, tol, seed):
    frame = sc.frame if sc.frame is not None else orthonormal_frame(sc.basis)
    return [H.check_zonotope_bound(sc.density, frame, sc.alphas, tol["slack"])]


def _run_theorem_lw(sc, tol, seed):
    return [H.check_theorem_lw(sc.density, sc.body, sc.basis, tol["slack"])]


def _run_theorem_ball(sc, tol, seed):
    frame = sc.frame if sc.frame is not None else orthonormal_frame(sc.basis)
    return [H.check_theorem_ball(sc.density, sc.body, frame, tol["slack"])]


def _run_isotropic(sc, tol, seed):
    return [verify_isotropic(sc.frame, tol["frame_atol"])]


def _run_gamma(sc, tol, seed):
    if not verify_isotropic(sc.frame, tol["frame_atol"]).passed:
        return [skipped("gamma_identity", ["frame is not isotropic"])]
    return [gamma_table(sc.frame, tol["frame_atol"])[1]]


def _run_projection_inequality(sc, tol, seed):
    Z = sc.the_zonotope()
    G = Z.generators
    return [H.check_projection_inequality(sc.density, Z, v / np.linalg.norm(v), tol["slack"])
            for v in G]


def _run_lebesgue_limit(sc, tol, seed):
    if not isinstance(sc.density, DirectionalPower):
        return [skipped("lebesgue_limit", ["needs a directional_power density"])]
    p_list = sc.options.get("p_list", [1.0, 10.0, 100.0, 1000.0])
    return H.lebesgue_limit_study(sc.body, sc.basis, p_list, sc.density.theta, tol["slack"])


CHECKS = {
    "homogeneity": ((), _run_homogeneity),
    "p_concavity": ((), _run_p_concavity),
    "monotonicity": ((), _run_monotonicity),
    "measure_mc": (("body",), _run_measure_mc),
    "pyramid": (("body",), _run_pyramid),
    "mixed_routes": (("body",), _run_mixed_routes),
    "projection_routes": (("body",), _run_projection_routes),
    "self_mixed": (("zonotope",), _run_self_mixed),
    "zonotope_expansion": (("body", "zonotope"), _run_zonotope_expansion),
    "linearity": (("body", "second_body", "zonotope"), _run_linearity),
    "borell": (("body", "second_body"), _run_borell),
    "minkowski_first": (("body", "second_body"), _run_minkowski_first),
    "face_bound": (("basis", "alphas"), _run_face_bound),
    "zonotope_bound": (("alphas",), _run_zonotope_bound),
    "theorem_lw": (("body", "basis"), _run_theorem_lw),
    "theorem_ball": (("body",), _run_theorem_ball),
    "isotropic": (("frame",), _run_isotropic),
    "gamma": (("frame",), _run_gamma),
    "projection_inequality": (("zonotope",), _run_projection_inequality),
    "lebesgue_limit": (("body", "basis"), _run_lebesgue_limit),
}


def validate(sc):
    n = sc.density.dim
    for key in ("body", "second_body", "zonotope"):
        b = getattr(sc, key)
        if b is not None and b.dim != n:
            raise ConfigError(f"{sc.name}: {key} has dimension {b.dim}, density {n}")
    if sc.basis is not None and np.asarray(sc.basis).shape[-1] != n:
        raise ConfigError(f"{sc.name}: basis dimension differs from density")
    if sc.frame is not None and sc.frame.dim != n:
        raise ConfigError(f"{sc.name}: frame dimension differs from density")
    for name in sc.checks:
        if name not in CHECKS:
            raise ConfigError(f"{sc.name}: unknown check {name!r}")
        required, _ = CHECKS[name]
        if name in ("zonotope_bound", "theorem_ball") and sc.frame is None and sc.basis is None:
            raise ConfigError(f"{sc.name}: check {name!r} needs a frame or basis")
        missing = _needs(sc, *required)
        if missing:
            raise ConfigError(f"{sc.name}: check {name!r} needs {', '.join(missing)}")


def resolve_tolerances(overrides=None):
    tol = dict(DEFAULT_TOLERANCES)
    for key, val in (overrides or {}).items():
        if key not in tol:
            raise ConfigError(f"unknown tolerance {key!r}")
        tol[key] = float(val)
    return tol


def run_scenario(sc, tolerances=None, seed=0, checks=None):
    """Run the scenario's checks (or ``checks``) in order; returns CheckReports."""
    tol = resolve_tolerances(tolerances)
    out = []
    for name in (checks if checks is not None else sc.checks):
        _, runner = CHECKS[name]
        for rep in runner(sc, tol, seed):
            rep.metadata.setdefault("scenario", sc.name)
            out.append(rep)
    return out


# ---------------------------------------------------------------------------
# built-in instances
# ---------------------------------------------------------------------------

_S = np.sqrt(0.5)
ROTATED_BASIS = np.array([[_S, _S], [-_S, _S]])


def t1():
    """g = <x, e2>_+ (p = 1) on the unit square."""
    return Scenario("T1", DirectionalPower([0.0, 1.0], 1.0), body=cube(0.0, 1.0, 2),
                    second_body=zonotope(np.eye(2)), zonotope=zonotope(np.eye(2)),
                    checks=["pyramid", "mixed_routes", "projection_routes", "self_mixed",
                            "zonotope_expansion", "linearity", "minkowski_first"])


def t3():
    """T1 density and body with the basis rotated by 45 degrees."""
    return Scenario("T3", DirectionalPower([0.0, 1.0], 1.0), body=cube(0.0, 1.0, 2),
                    basis=ROTATED_BASIS, alphas=np.ones(2),
                    frame=orthonormal_frame(ROTATED_BASIS),
                    checks=["theorem_lw", "theorem_ball", "face_bound", "zonotope_bound",
                            "isotropic", "gamma"])


def triple():
    """The 120-degree frame in the plane with the T1 density and body."""
    return Scenario("triple120", DirectionalPower([0.0, 1.0], 1.0), body=cube(0.0, 1.0, 2),
                    frame=regular_triple(np.deg2rad(10.0)), alphas=np.array([0.7, 1.0, 1.3]),
                    checks=["theorem_ball", "zonotope_bound", "isotropic", "gamma",
                            "projection_inequality"])


def builtin_scenarios():
    return [t1(), t3(), triple()]


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _rotation(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


def identity_scenarios():
    """Twenty fixed instances for the identity suite (n in {2, 3})."""
    rng = np.random.default_rng(20240601)
    ps = [0.5, 1.0, 2.0, 1000.0]
    out = []
    for idx in range(20):
        n = 2 if idx < 12 else 3
        p = ps[idx % 4]
        theta = _unit(np.r_[rng.normal(size=n - 1) * 0.4, 1.0])
        if idx % 5 == 4:
            other = _unit(theta + 0.6 * rng.normal(size=n))
            density = MinLinearPower([theta, other], p)
        else:
            density = DirectionalPower(theta, p)
        center = 0.6 * theta + 0.3 * rng.normal(size=n)
        kind = idx % 3
        if kind == 0:
            body = box(_rotation(rng, n), rng.uniform(0.4, 1.0, size=n))
            body = vpolytope(body.vertices + center)
        elif kind == 1:
            pts = rng.normal(size=(n + 5, n))
            pts /= np.linalg.norm(pts, axis=1)[:, None]
            body = vpolytope(center + 0.8 * pts)
        else:
            body = vpolytope(cube(0.0, 1.0, n).vertices + center - 0.5)
        gens = rng.normal(size=(n + 1, n)) * 0.5
        Z = zonotope(gens)
        E = box(_rotation(rng, n), rng.uniform(0.2, 0.6, size=n))
        out.append(Scenario(f"identity-{idx:02d}", density, body=body, second_body=E,
                            zonotope=Z,
                            checks=["self_mixed", "zonotope_expansion", "linearity",
                                    "projection_routes"]))
    return out
