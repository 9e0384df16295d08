"""Seeded random instances for the inequality checks and the fuzz driver.

Every instance draws from its own generator seeded by
``SeedSequence([seed, check_id, index])``, so the aggregate does not depend
on how instances are spread over worker processes.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bodies import box, vpolytope, zonotope
from .densities import DirectionalPower, MinLinearPower
from .frames import isotropic_position, orthonormal_frame, projection_family, regular_triple
from .scenarios import ConfigError, Scenario, resolve_tolerances, run_scenario

DEFECT_THRESHOLD = 1.0 - 1e-3
GTILDE_FLOOR = 1e-6
MAX_REJECTIONS = 200

# stable integer ids; never renumber, they feed the seed sequence
FUZZ_CHECKS = {
    "borell": 1,
    "minkowski_first": 2,
    "face_bound": 3,
    "zonotope_bound": 4,
    "theorem_lw": 5,
    "theorem_ball": 6,
}

DEFAULT_CONFIG = {
    "checks": list(FUZZ_CHECKS),
    "dims": [2, 3],
    "p_values": [0.5, 1.0, 2.0],
    "min_linear_fraction": 0.25,
}


def _unit(v):
    return v / np.linalg.norm(v)


def random_unit(rng, n):
    return _unit(rng.normal(size=n))


def random_rotation(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(R))


def random_density(rng, n, p_values, min_linear_fraction=0.25):
    p = float(rng.choice(p_values))
    theta = random_unit(rng, n)
    if rng.random() < min_linear_fraction:
        other = _unit(theta + 0.7 * rng.normal(size=n))
        return MinLinearPower([theta, other], p)
    return DirectionalPower(theta, p)


def random_body(rng, d):
    """Rotated box or sphere-vertex polytope placed so it meets supp(g)."""
    n = d.dim
    w = d.interior_direction()
    center = rng.uniform(0.3, 1.5) * w + 0.3 * rng.normal(size=n)
    if rng.random() < 0.5:
        B = box(random_rotation(rng, n), rng.uniform(0.2, 1.0, size=n))
        verts = B.vertices + center
    else:
        pts = rng.normal(size=(n + 4, n))
        pts /= np.linalg.norm(pts, axis=1)[:, None]
        verts = center + rng.uniform(0.3, 1.0) * pts
    K = vpolytope(verts)
    if d.eval(verts).max() <= GTILDE_FLOOR and d.eval(center) <= GTILDE_FLOOR:
        return None
    return K


def random_frame(rng, n):
    """Orthonormal basis, rotated 120-degree triple (n=2) or a frame put in isotropic position."""
    r = rng.random()
    if r < 0.4:
        return orthonormal_frame(random_rotation(rng, n))
    if n == 2:
        return regular_triple(rng.uniform(0.0, 2.0 * math.pi))
    return isotropic_position(rng.normal(size=(n + 1 + int(rng.integers(0, 3)), n)))


def _gtilde_ok(d, vectors):
    return float(np.min(d.eval_symmetrized(np.asarray(vectors)))) >= GTILDE_FLOOR


def _draw(check, rng, cfg):
    n = int(rng.choice(cfg["dims"]))
    d = random_density(rng, n, cfg["p_values"], cfg["min_linear_fraction"])
    name = check
    if check in ("borell", "minkowski_first"):
        A, B = random_body(rng, d), random_body(rng, d)
        if A is None or B is None:
            return None
        return Scenario(name, d, body=A, second_body=B, checks=[check],
                        options={"lambda": float(rng.uniform(0.1, 0.9))})
    if check == "face_bound":
        U = random_rotation(rng, n)
        i = int(rng.integers(0, n))
        if d.eval(U[i]) < GTILDE_FLOOR:
            U[i] = -U[i]
        if d.eval(U[i]) < GTILDE_FLOOR or not _gtilde_ok(d, U):
            return None
        return Scenario(name, d, basis=U, alphas=rng.uniform(0.3, 1.5, size=n),
                        checks=[check], options={"face_index": i})
    if check == "theorem_lw":
        U = random_rotation(rng, n)
        K = random_body(rng, d)
        if K is None or not _gtilde_ok(d, U):
            return None
        return Scenario(name, d, body=K, basis=U, checks=[check])
    frame = random_frame(rng, n)
    if not _gtilde_ok(d, projection_family(frame).members):
        return None
    if check == "zonotope_bound":
        alphas = rng.uniform(0.3, 1.5, size=len(frame))
        return Scenario(name, d, frame=frame, alphas=alphas, checks=[check])
    K = random_body(rng, d)
    if K is None:
        return None
    return Scenario(name, d, body=K, frame=frame, checks=[check])


def generate_instance(check, seed, index, config=None):
    """Hypothesis-valid scenario for ``check`` (rejection sampling)."""
    cfg = dict(DEFAULT_CONFIG, **(config or {}))
    ss = np.random.SeedSequence([int(seed), FUZZ_CHECKS[check], int(index)])
    rng = np.random.Generator(np.random.Philox(ss))
    for _ in range(MAX_REJECTIONS):
        sc = _draw(check, rng, cfg)
        if sc is not None:
            sc.name = f"{check}-{index}"
            return sc
    raise RuntimeError(f"could not draw a valid {check} instance")


def _run_one(args):
    check, seed, index, cfg, tol = args
    sc = generate_instance(check, seed, index, cfg)
    if check == "face_bound":
        from .harness import check_face_bound

        rep = check_face_bound(sc.density, sc.basis, sc.alphas, sc.options["face_index"],
                               tol["slack"])
        reports = [rep]
    else:
        reports = run_scenario(sc, tol, seed=index)
    out = []
    for rep in reports:
        row = {"index": index, "status": rep.status,
               "ratio": rep.ratio if math.isfinite(rep.ratio) else None,
               "hypothesis_ok": bool(rep.hypothesis_ok)}
        if rep.status != "pass":
            row["scenario"] = sc.to_dict()
            row["reasons"] = list(rep.reasons)
        out.append(row)
    return check, out


def resolve_jobs(jobs=None):
    if jobs is None:
        env = os.environ.get("HOMOCONE_JOBS")
        jobs = int(env) if env else 1
    if jobs < 1:
        raise ConfigError("jobs must be at least 1")
    return jobs


def fuzz(config=None, seed=0, count=100, jobs=None):
    """Run ``count`` seeded instances per configured check; returns the aggregate dict."""
    cfg = dict(DEFAULT_CONFIG)
    config = dict(config or {})
    tol = resolve_tolerances(config.pop("tolerances", None))
    for key in ("count", "seed", "name"):
        config.pop(key, None)
    unknown = set(config) - set(cfg)
    if unknown:
        raise ConfigError(f"unknown fuzz config keys: {sorted(unknown)}")
    cfg.update(config)
    if count < 1:
        raise ConfigError("count must be positive")
    for c in cfg["checks"]:
        if c not in FUZZ_CHECKS:
            raise ConfigError(f"no instance generator for check {c!r}")
    if not set(cfg["dims"]) <= {2, 3}:
        raise ConfigError("fuzz dims must be 2 or 3")
    tasks = [(c, seed, i, cfg, tol) for c in cfg["checks"] for i in range(count)]
    jobs = resolve_jobs(jobs)
    if jobs == 1:
        results = list(map(_run_one, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return aggregate(results, seed, count, tol)


def aggregate(results, seed, count, tol):
    checks = {}
    for check, rows in results:
        entry = checks.setdefault(check, {"instances": []})
        entry["instances"].extend(rows)
    total_defects = total_failures = 0
    for entry in checks.values():
        rows = entry["instances"]
        ratios = [r["ratio"] for r in rows if r["status"] != "skip" and r["ratio"] is not None]
        entry["evaluated"] = len(ratios)
        entry["passed"] = sum(r["status"] == "pass" for r in rows)
        entry["failures"] = sum(r["status"] == "FAIL" for r in rows)
        entry["skips"] = sum(r["status"] == "skip" for r in rows)
        entry["min_ratio"] = min(ratios) if ratios else None
        entry["defects"] = [r["index"] for r in rows
                            if r["ratio"] is not None and r["ratio"] < DEFECT_THRESHOLD]
        total_defects += len(entry["defects"])
        total_failures += entry["failures"]
    return {
        "seed": int(seed),
        "count": int(count),
        "defect_threshold": DEFECT_THRESHOLD,
        "tolerances": tol,
        "checks": checks,
        "total_failures": total_failures,
        "total_defects": total_defects,
        "passed": total_failures == 0 and total_defects == 0,
    }
