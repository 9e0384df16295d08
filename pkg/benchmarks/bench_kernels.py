"""Compare the numba and numpy kernel backends.

Kernel timings call both implementations directly on the same inputs.  The
end-to-end timings run a measure computation in a subprocess with and
without HOMOCONE_DISABLE_NUMBA so the dispatch path is exercised too.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import itertools
import os
import subprocess
import sys
import timeit

import numpy as np

from homocone import _accel
from homocone.quadrature import grundmann_moeller

END_TO_END = """
import time
from homocone import MinLinearPower, measure_body, vpolytope
from homocone._accel import backend
import numpy as np
rng = np.random.default_rng(0)
d = MinLinearPower([[0.1, 0.2, 1.0], [0.3, -0.1, 1.0]], 0.5)
K = vpolytope(np.array([0.0, 0.0, 1.2]) + rng.normal(size=(12, 3)) * 0.7)
measure_body(d, K)
t = time.perf_counter()
for _ in range(3):
    v = measure_body(d, K).value
mc = measure_body(d, K, method="monte_carlo", samples=400000, seed=1).value
print(backend(), (time.perf_counter() - t) / 3, v, mc)
"""


def kernel_inputs(rng):
    n = 3
    A = np.vstack([np.eye(n), -np.eye(n), rng.normal(size=(14, n))])
    b = np.concatenate([np.ones(2 * n), rng.uniform(0.5, 1.5, size=14)])
    combos = np.array(list(itertools.combinations(range(len(A)), n)), dtype=np.int64)
    bary, w = grundmann_moeller(4, n)
    bary, w = np.ascontiguousarray(bary), np.ascontiguousarray(w)
    simplices = rng.normal(size=(4000, n + 1, n))
    W = rng.normal(size=(2, n))
    c = np.array([0.5, 0.7])
    U = rng.random((65536, n))
    lo, hi = -np.ones(n), np.ones(n)
    return {
        "enumerate_vertices": ((A, b, combos, 1e-11), {}),
        "simplex_rule_sums": ((simplices, bary, w, W, c, 0.5), {}),
        "welford_chunk": ((U, lo, hi, A, b, W, c, 0.5, 1e-12), {}),
    }


def bench(fn, args, repeat):
    fn(*args)  # warm-up / compile
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(12345)
    if _accel.numba is None:
        print("numba is not importable; only the numpy path can run")
        return 1
    print(f"{'kernel':<22} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}  max|diff|")
    for name, (kargs, _) in kernel_inputs(rng).items():
        f_np = getattr(_accel, f"{name}_numpy")
        f_nb = getattr(_accel, f"{name}_numba")
        t_np = bench(f_np, kargs, args.repeat)
        t_nb = bench(f_nb, kargs, args.repeat)
        r_np, r_nb = f_np(*kargs), f_nb(*kargs)
        if name == "enumerate_vertices":
            diff = abs(len(r_np) - len(r_nb)) + (np.abs(np.sort(r_np, axis=0) - np.sort(r_nb, axis=0)).max()
                                                 if len(r_np) == len(r_nb) and len(r_np) else 0.0)
        else:
            diff = float(np.max(np.abs(np.asarray(r_np, dtype=float) - np.asarray(r_nb, dtype=float))))
        print(f"{name:<22} {1e3 * t_np:>11.3f} {1e3 * t_nb:>11.3f} {t_np / t_nb:>8.1f}  {diff:.2e}")
    print()
    print("end to end (3-D polytope, quadrature + 4e5-sample Monte Carlo):")
    for flag in ("1", "0"):
        env = dict(os.environ, HOMOCONE_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"  {out[0]:<6} {1e3 * float(out[1]):9.1f} ms   quadrature={float(out[2]):.12g}"
              f"   monte_carlo={float(out[3]):.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
