"""Benchmark the hot kernel (bump-polynomial derivatives on point arrays)
on the numba and numpy backends.

Run: python benchmarks/bench_kernels.py [npoints]
"""

import sys
import time

import numpy as np

from epsnets import _kernels


def bench(fn, coeffs, ts, d, repeats=7):
    fn(coeffs, ts[:16], d)  # warm up (JIT compile on the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(coeffs, ts, d)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    rng = np.random.default_rng(0)
    ts = rng.uniform(-1.2, 1.2, size=n)
    coeffs = np.array([0.5, -1.0, 2.0, 0.25])

    impls = [("numpy", _kernels.bump_poly_deriv_numpy)]
    if _kernels.bump_poly_deriv_numba is not None:
        impls.append(("numba", _kernels.bump_poly_deriv_numba))
    else:
        print("numba backend unavailable (not installed or disabled); timing numpy only")

    print(f"bump-polynomial derivative kernel, {n} points, best of 7")
    print(f"{'order':>6} " + " ".join(f"{name:>12}" for name, _ in impls) + ("      speedup" if len(impls) == 2 else ""))
    for d in (0, 1, 3, 5):
        times = [bench(fn, coeffs, ts, d) for _, fn in impls]
        row = f"{d:>6} " + " ".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>10.1f}x"
        print(row)

    # agreement spot check
    if len(impls) == 2:
        for d in (0, 2, 4):
            a = impls[0][1](coeffs, ts, d)
            b = impls[1][1](coeffs, ts, d)
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12), f"backend mismatch at order {d}"
        print("backends agree to 1e-12 on orders 0, 2, 4")


if __name__ == "__main__":
    main()
