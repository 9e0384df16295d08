"""Command line front end: ``homocone verify|fuzz|demo``."""

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .fuzz import fuzz, resolve_jobs
from .scenarios import CHECKS, ConfigError, builtin_scenarios, resolve_tolerances, run_scenario, scenario_from_dict

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _clean(obj):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj):
    text = json.dumps(_clean(obj), sort_keys=True, indent=2, default=_default)
    return json.dumps(_clean(json.loads(text)), sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return data


def parse_run_config(data):
    """Validate a verify config; returns (scenarios, tolerances, seed)."""
    checks = data.get("checks")
    if checks is not None:
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise ConfigError(f"unknown check names: {bad}")
    items = data.get("scenarios")
    if items is None:
        items = [data] if "density" in data else []
    if not items:
        raise ConfigError("config has no scenarios")
    scenarios = [scenario_from_dict(item, default_checks=checks or ()) for item in items]
    tol = resolve_tolerances(data.get("tolerances"))
    seed = data.get("seed")
    if seed is None and any("measure_mc" in sc.checks for sc in scenarios):
        raise ConfigError("a seed is required when Monte Carlo checks are selected")
    return scenarios, tol, int(seed or 0)


def _csv_rows(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "name", "lhs", "rhs", "ratio", "hypothesis_ok", "pass"])
    for r in reports:
        w.writerow([r.get("scenario", ""), r["name"], r["lhs"], r["rhs"], r["ratio"],
                    r["hypothesis_ok"], r["status"]])
    return buf.getvalue()


def _fuzz_csv(agg):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "evaluated", "passed", "failures", "skips", "min_ratio", "defects"])
    for name in sorted(agg["checks"]):
        e = agg["checks"][name]
        w.writerow([name, e["evaluated"], e["passed"], e["failures"], e["skips"],
                    e["min_ratio"], len(e["defects"])])
    return buf.getvalue()


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_dict(rep, scenario):
    d = rep.to_dict()
    d["scenario"] = scenario
    d["status"] = rep.status
    return d


def _verify_one(task):
    sc, tol, seed = task
    return [_report_dict(r, sc.name) for r in run_scenario(sc, tol, seed)]


def cmd_verify(config_path, out=None, fmt="json", jobs=None):
    scenarios, tol, seed = parse_run_config(load_config(config_path))
    jobs = resolve_jobs(jobs)
    tasks = [(sc, tol, seed) for sc in scenarios]
    if jobs == 1 or len(tasks) == 1:
        results = [_verify_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_verify_one, tasks))
    reports = [r for chunk in results for r in chunk]
    failed = any(r["status"] == "FAIL" for r in reports)
    if fmt == "csv":
        _emit(_csv_rows(reports), out)
    else:
        _emit(dumps({"seed": seed, "tolerances": tol, "reports": reports,
                     "passed": not failed}), out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_fuzz(config_path, count=None, seed=None, out=None, fmt="json", jobs=None):
    data = load_config(config_path)
    count = int(count if count is not None else data.get("count", 100))
    seed = seed if seed is not None else data.get("seed")
    if seed is None:
        raise ConfigError("fuzzing needs a seed (--seed or config 'seed')")
    if count < 1:
        raise ConfigError("--count must be a positive integer")
    agg = fuzz(data, seed=int(seed), count=count, jobs=jobs)
    _emit(_fuzz_csv(agg) if fmt == "csv" else dumps(agg), out)
    return EXIT_OK if agg["passed"] else EXIT_FAIL


def _fmt(x):
    return "-" if x is None or not math.isfinite(x) else f"{x:.6g}"


def cmd_demo(out=None, fmt="json"):
    start = time.perf_counter()
    rows = []
    for sc in builtin_scenarios():
        for r in run_scenario(sc):
            rows.append(_report_dict(r, sc.name))
    lines = [f"{'scenario':<10} {'check':<22} {'lhs':>12} {'rhs':>12} {'ratio':>12}  status"]
    for r in rows:
        lines.append(f"{r['scenario']:<10} {r['name']:<22} {_fmt(r['lhs']):>12} "
                     f"{_fmt(r['rhs']):>12} {_fmt(r['ratio']):>12}  {r['status']}")
    lines.append(f"{len(rows)} checks in {time.perf_counter() - start:.1f}s")
    print("\n".join(lines))
    if out:
        _emit(_csv_rows(rows) if fmt == "csv" else dumps({"reports": rows}), out)
    return EXIT_FAIL if any(r["status"] == "FAIL" for r in rows) else EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: $HOMOCONE_JOBS or 1)")
    parser = argparse.ArgumentParser(prog="homocone",
                                     description="Numerical checks for measures with homogeneous concave densities.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the checks listed in a scenario config")
    v.add_argument("config")
    f = sub.add_parser("fuzz", parents=[common], help="run seeded random instances")
    f.add_argument("config")
    f.add_argument("--count", type=int, default=None)
    f.add_argument("--seed", type=int, default=None)
    sub.add_parser("demo", parents=[common], help="run the built-in scenarios")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            return cmd_verify(args.config, args.out, args.format, args.jobs)
        if args.command == "fuzz":
            return cmd_fuzz(args.config, args.count, args.seed, args.out, args.format, args.jobs)
        return cmd_demo(args.out, args.format)
    except ConfigError as exc:
        print(f"homocone: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
