"""Time the compiled series kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload runs under both backends and the outputs are compared,
so a speedup is only reported for identical results.
"""

import argparse
import time

from qkgenus1 import formulas, kernels
from qkgenus1.arith import taylor_expand
from qkgenus1.engine import Engine


def workloads():
    sub4 = formulas.kawasaki_subtracted(4)
    sub5 = formulas.kawasaki_subtracted(5)
    yield "taylor one-point, degree 4000", lambda: taylor_expand(formulas.one_point_L(), (0, 4000))
    yield "taylor subtracted n=4, order 14", lambda: taylor_expand(sub4, (14,) * 5, 14)
    yield "taylor subtracted n=5, order 10", lambda: taylor_expand(sub5, (10,) * 6, 10)
    yield "engine series n=4, order 12", lambda: Engine().full_genfun_series(4, (12,) * 5, 12)
    yield "engine series n=5, order 9", lambda: Engine().full_genfun_series(5, (9,) * 6, 9)


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")

    print(f"{'workload':34} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    try:
        for name, fn in workloads():
            kernels.set_backend("python")
            tp, ref = best_of(fn, args.repeat)
            kernels.set_backend("cython")
            tc, out = best_of(fn, args.repeat)
            if out != ref:
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:34} {tp:9.3f} {tc:9.3f} {tp / tc:7.1f}x")
    finally:
        kernels.set_backend("cython")


if __name__ == "__main__":
    main()
