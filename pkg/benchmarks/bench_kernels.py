"""Time each kernel under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--size 200000]

The first numba call includes JIT compilation and is done once before timing.
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from psiosc.kernels import fiber, form2, simul
from psiosc.regions2d import form2_word_threshold
from psiosc.regions_md import word_threshold

BACKENDS = ("numba", "numpy")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(size):
    rng = np.random.default_rng(0)
    A = rng.integers(0, 2**64, size=size, dtype=np.uint64)
    B = rng.integers(0, 2**64, size=size, dtype=np.uint64)
    W = rng.integers(0, 2**64, size=(size, 2), dtype=np.uint64)
    a, b = int(A[0]), int(B[0])
    H2 = form2_word_threshold(32, Fraction(1, 10))
    Hm = word_threshold(1000, Fraction(1, 100), 2)
    # one fiber at k = 60 on a 2**-20 beta grid
    k, G = 60, 3600 * 10 * 2**20
    wG = G // (10 * 3600)
    bG = 12345 * (G >> 20)
    return {
        "form2.shell_min T=2000": lambda be: form2.shell_min(a, b, 2000, be),
        f"form2.member_status n={size} k=32": lambda be: form2.member_status(A, B, 32, H2, 0, be),
        f"simul.member_status n={size} k=1000": lambda be: simul.member_status(W, 1000, Hm, 0, be),
        "fiber.fiber_union k=60": lambda be: fiber.fiber_union(k, G, wG, bG, 0, G, be),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--size", type=int, default=200_000)
    args = ap.parse_args()
    rows = []
    for name, fn in cases(args.size).items():
        fn("numba")  # compile
        t = {be: best_of(lambda: fn(be), args.repeat) for be in BACKENDS}
        rows.append((name, t["numba"], t["numpy"]))
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba (s)':>10}  {'numpy (s)':>10}  {'speedup':>8}")
    for name, tn, tp in rows:
        print(f"{name:<{width}}  {tn:10.4f}  {tp:10.4f}  {tp / tn:8.1f}")


if __name__ == "__main__":
    main()
