#!/usr/bin/env python3
"""Benchmark the similarity kernels.

Times the numba JIT path against the pure numpy fallback for both hot
kernels (sorted-id information merge, batched cosine) and checks that the
two paths agree numerically before trusting the numbers.  Run it from the
repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --sizes 128,1024,16384 --rows 50000

With DISTWSD_PURE_NUMPY set the JIT path is unavailable and only the
fallback is timed.
"""

import argparse
import time

import numpy as np

from distwsd import _kernels


def time_best(fn, args_list, repeat):
    """Best mean seconds per call over `repeat` passes of the workload."""
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        elapsed = time.perf_counter() - start
        best = min(best, elapsed / len(args_list))
    return best


def make_id_pairs(rng, size, count, universe=4_000_000, overlap=0.3):
    """Pairs of sorted unique feature-id arrays with partial overlap."""
    pairs = []
    for _ in range(count):
        ids_a = np.sort(rng.choice(universe, size=size, replace=False)).astype(np.int64)
        n_shared = int(size * overlap)
        shared = rng.choice(ids_a, size=n_shared, replace=False)
        fresh = rng.choice(universe, size=size - n_shared, replace=False)
        ids_b = np.sort(np.unique(np.concatenate([shared, fresh]))).astype(np.int64)
        info_a = rng.uniform(0.5, 15.0, size=ids_a.size)
        pairs.append((ids_a, info_a, ids_b))
    return pairs


def fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} µs"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.3f} s "


def check_agreement(name, got, want, atol=1e-9, rtol=1e-9):
    if not np.allclose(got, want, atol=atol, rtol=rtol):
        raise SystemExit(f"{name}: paths disagree beyond tolerance "
                         f"(max abs diff {np.max(np.abs(np.asarray(got) - np.asarray(want))):g})")


def bench_shared_information(rng, sizes, repeat, rows_out):
    for size in sizes:
        count = max(4, min(200, 200_000 // size))
        pairs = make_id_pairs(rng, size, count)
        numpy_args = pairs
        np_time = time_best(_kernels.shared_information_numpy, numpy_args, repeat)
        if _kernels.NUMBA_ENABLED:
            _kernels.shared_information(*pairs[0])  # compile outside the clock
            want = [_kernels.shared_information_numpy(*p) for p in pairs]
            got = [_kernels.shared_information(*p) for p in pairs]
            check_agreement("shared_information", got, want)
            nb_time = time_best(_kernels.shared_information, pairs, repeat)
        else:
            nb_time = None
        rows_out.append(("shared_information", f"{size} ids", nb_time, np_time))


def bench_cosine_many(rng, rows, dim, repeat, rows_out):
    matrix = rng.standard_normal((rows, dim))
    norms = np.sqrt((matrix * matrix).sum(axis=1))
    query = rng.standard_normal(dim)
    qnorm = float(np.sqrt(query @ query))
    args = [(matrix, norms, query, qnorm)]
    np_time = time_best(_kernels.cosine_many_numpy, args, repeat)
    if _kernels.NUMBA_ENABLED:
        _kernels.cosine_many(*args[0])
        check_agreement(
            "cosine_many",
            _kernels.cosine_many(*args[0]),
            _kernels.cosine_many_numpy(*args[0]),
        )
        nb_time = time_best(_kernels.cosine_many, args, repeat)
    else:
        nb_time = None
    rows_out.append(("cosine_many", f"{rows}x{dim}", nb_time, np_time))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="64,512,4096,32768",
                        help="comma list of feature-set sizes for the merge kernel")
    parser.add_argument("--rows", type=int, default=20_000,
                        help="vector count for the cosine kernel")
    parser.add_argument("--dim", type=int, default=300,
                        help="vector dimension for the cosine kernel")
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing passes; the best one is reported")
    parser.add_argument("--seed", type=int, default=99)
    args = parser.parse_args(argv)

    sizes = [int(s) for s in args.sizes.split(",") if s]
    rng = np.random.default_rng(args.seed)
    print(f"numba path: {'enabled' if _kernels.NUMBA_ENABLED else 'disabled (numpy fallback)'}")

    rows = []
    bench_shared_information(rng, sizes, args.repeat, rows)
    bench_cosine_many(rng, args.rows, args.dim, args.repeat, rows)

    header = f"{'kernel':<20}{'workload':<14}{'numba':>12}{'numpy':>12}{'speedup':>9}"
    print()
    print(header)
    print("-" * len(header))
    for kernel, workload, nb_time, np_time in rows:
        nb_cell = fmt(nb_time) if nb_time is not None else "       -   "
        ratio = f"{np_time / nb_time:7.1f}x" if nb_time else "      - "
        print(f"{kernel:<20}{workload:<14}{nb_cell:>12}{fmt(np_time):>12}{ratio:>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
