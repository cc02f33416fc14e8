#!/usr/bin/env python3
"""Compare the compiled walk core against the pure Python lane.

Times the path-following walk and the exhaustive full-cell count on the
rotation map over a range of grid resolutions, verifying along the way
that both lanes return identical results.

    python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import statistics
import time

from simplexfp import (
    KuhnTriangulation,
    LipschitzModulus,
    MapInducedLabeling,
    SolveConfig,
    builtin,
    count_full_cells,
    epsilon_fixed_point,
    find_full_cell_pathfollow,
    kernels,
    truncate_map,
)


def timed(fn, repeats=3):
    samples = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - start)
    return result, statistics.median(samples)


def fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.3f} s "


def bench_walk(resolutions, repeats):
    f = builtin("rotation", n=3)
    print("\npath-following walk, rotation-3 on F^2")
    print(f"{'resolution':>12} {'python':>12} {'cython':>12} {'speedup':>9}")
    for k in resolutions:
        t = KuhnTriangulation(2, k, check_cap=False)

        def run(force):
            lab = MapInducedLabeling(t, truncate_map(f, 2))
            return find_full_cell_pathfollow(
                t, lab, check_revisits=False, force_python=force)

        slow_cell, t_py = timed(lambda: run(True), repeats)
        if kernels.compiled_available():
            fast_cell, t_cy = timed(lambda: run(False), repeats)
            assert fast_cell.vertices == slow_cell.vertices
            print(f"{k:>12} {fmt(t_py)} {fmt(t_cy)} {t_py / t_cy:>8.1f}x")
        else:
            print(f"{k:>12} {fmt(t_py)} {'n/a':>12} {'':>9}")


def bench_count(resolutions, repeats):
    f = builtin("rotation", n=3)
    print("\nexhaustive full-cell count, rotation-3 on F^2")
    print(f"{'resolution':>12} {'python':>12} {'cython':>12} {'speedup':>9}")
    for k in resolutions:
        t = KuhnTriangulation(2, k)

        def run(force):
            kernels.force_python(force)
            try:
                lab = MapInducedLabeling(t, truncate_map(f, 2))
                return count_full_cells(t, lab)
            finally:
                kernels.force_python(False)

        slow, t_py = timed(lambda: run(True), repeats)
        if kernels.compiled_available():
            fast, t_cy = timed(lambda: run(False), repeats)
            assert fast == slow
            print(f"{k:>12} {fmt(t_py)} {fmt(t_cy)} {t_py / t_cy:>8.1f}x")
        else:
            print(f"{k:>12} {fmt(t_py)} {'n/a':>12} {'':>9}")


def bench_modulus_solve(repeats):
    print("\nsingle-pass solve with a Lipschitz modulus, rotation-3, eps=0.5")
    print(f"{'lane':>12} {'time':>12} {'resolution':>12}")
    f = builtin("rotation", n=3)
    for force in (True, False):
        if force is False and not kernels.compiled_available():
            continue
        config = SolveConfig(modulus=LipschitzModulus(4.0), force_python=force)
        cert, t_med = timed(lambda: epsilon_fixed_point(f, 0.5, config), repeats)
        lane = "python" if force else "cython"
        print(f"{lane:>12} {fmt(t_med)} {cert.witness.resolution:>12}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="smaller sizes, single repetition")
    args = parser.parse_args()

    repeats = 1 if args.quick else 3
    walk_sizes = (1 << 10, 1 << 13) if args.quick else (1 << 10, 1 << 14, 1 << 17)
    count_sizes = (32, 96) if args.quick else (64, 192, 384)

    print(f"compiled kernel available: {kernels.compiled_available()}")
    print(f"active kernel: {kernels.active_kernel()}")
    bench_walk(walk_sizes, repeats)
    bench_count(count_sizes, repeats)
    bench_modulus_solve(repeats)


if __name__ == "__main__":
    main()
