"""Time the numba kernels against their pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes compilation and is reported separately.
"""

import argparse
import time

import numpy as np

from walkval import kernels
from walkval._jit import NUMBA_AVAILABLE

MOD = 3**19


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    X = rng.integers(0, 200, size=(200_000, 4)).astype(np.int64)
    w = rng.integers(0, MOD, size=200).astype(np.int64)
    pv = rng.integers(0, MOD, size=X.shape[0]).astype(np.int64)
    a = rng.integers(0, MOD, size=3**8).astype(np.int64)
    b = rng.integers(0, MOD, size=3**8).astype(np.int64)
    yield ("theta_factorial_table p=3 m=10^6",
           lambda: kernels._theta_factorial_table_numpy(3, 10**6, MOD),
           lambda: kernels._theta_factorial_table_numba(3, 10**6, MOD))
    yield ("weighted_vector_sum 200000x4",
           lambda: kernels._weighted_vector_sum_numpy(X, w, pv, MOD),
           lambda: kernels._weighted_vector_sum_numba(X, w, pv, MOD))
    yield ("box_mul p=3 L=8",
           lambda: kernels._box_mul_numpy(a, b, 3, 8, MOD),
           lambda: kernels._box_mul_numba(a, b, 3, 8, MOD))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not available (or WALKVAL_DISABLE_JIT is set)")
    print(f"{'kernel':36s} {'numpy s':>10s} {'numba s':>10s} {'first call':>11s} {'speedup':>8s}")
    for name, slow, fast in cases():
        start = time.perf_counter()
        ref = fast()
        first = time.perf_counter() - start
        got = slow()
        assert np.array_equal(np.asarray(ref), np.asarray(got)), name
        t_np = _best(slow, args.repeat)
        t_nb = _best(fast, args.repeat)
        print(f"{name:36s} {t_np:10.4f} {t_nb:10.4f} {first:11.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
