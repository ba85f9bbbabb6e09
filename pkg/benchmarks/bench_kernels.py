"""Compare the numba and numpy ring matrix products.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths must agree exactly; the script aborts otherwise.
"""

import argparse
import time

import numpy as np

from isocrys import _kernels
from isocrys.ring import RingSpec, random_matrix

CASES = [
    # (p, f, N, T, size)
    (5, 4, 16, 1, 6),
    (5, 4, 37, 3, 6),
    (5, 24, 16, 3, 6),
    (5, 1, 16, 2, 56),
    (7, 2, 12, 1, 32),
]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"backend: {_kernels.backend()}")
    print(f"{'p':>3} {'f':>3} {'N':>3} {'T':>2} {'n':>4} {'dtype':>6} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for p, f, N, T, n in CASES:
        spec = RingSpec(p=p, f=f, N=N, T=T)
        A = random_matrix(spec, n, n, rng)
        B = random_matrix(spec, n, n, rng)
        _kernels.ring_matmul(A, B, spec.red, spec.modulus)  # compile
        t_fast, fast = best_of(lambda: _kernels.ring_matmul(A, B, spec.red, spec.modulus), args.repeat)
        t_np, slow = best_of(lambda: _kernels.ring_matmul_numpy(A, B, spec.red, spec.modulus), args.repeat)
        if not np.array_equal(np.asarray(fast, dtype=object), np.asarray(slow, dtype=object)):
            raise SystemExit(f"paths disagree for {(p, f, N, T, n)}")
        dtype = "int64" if spec.dtype is np.int64 else "object"
        print(f"{p:>3} {f:>3} {N:>3} {T:>2} {n:>4} {dtype:>6} {1e3 * t_fast:>10.3f} {1e3 * t_np:>10.3f} "
              f"{t_np / t_fast:>8.1f}")


if __name__ == "__main__":
    main()
