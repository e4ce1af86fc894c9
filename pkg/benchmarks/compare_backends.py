#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel backends on the hot paths.

Times three workloads against both backends:

* configuration enumeration (count mode) at several (m, n) levels,
* batch feasibility filtering of a full enumeration level,
* the averaging-closed subset scan used by the minimality oracle.

Run from a source checkout or an installed environment::

    python3 benchmarks/compare_backends.py [--repeat 3] [--heavy]

The pure backend is what ``SOCREP_PURE=1`` selects at import time; here both
are constructed explicitly so one process can time them side by side.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from socrep import WeightTuple, count_configs
from socrep._kernels import HAS_NUMBA, MODE_COUNT, get_kernels
from socrep.exact import catalog


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_enumeration(kernels, m: int, n: int) -> float:
    s = np.zeros(m, np.int64)
    out = np.zeros((1, n, 2), np.int16)
    first = np.zeros((n, 2), np.int64)

    def run():
        kernels.enum_core(m, n, MODE_COUNT, s, 0, out, first)

    return run


def bench_feasibility(kernels, w: WeightTuple, n: int):
    pairs = catalog(w.m, n)
    s = np.asarray(w.s, np.int64)
    flags = np.zeros(pairs.shape[0], np.uint8)

    def run():
        kernels.feas_batch(pairs, w.m, s, w.s_hat, flags)

    return run


def bench_subset_scan(kernels, p: int, k: int):
    marks = np.zeros(p + 1, np.uint8)

    def run():
        kernels.mediated_scan(p, k, marks)

    return run


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    parser.add_argument(
        "--heavy",
        action="store_true",
        help="include the largest enumeration levels (tens of seconds pure)",
    )
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba is not importable; only the pure backend can run")
        return 1

    pure = get_kernels(pure=True)
    compiled = get_kernels(pure=False)

    enum_levels = [(3, 4), (3, 5), (4, 5)]
    feas_levels = [(WeightTuple((5, 3, 1)), 5), (WeightTuple((7, 5, 3)), 5)]
    scan_cases = [(40, 4), (56, 4)]
    if args.heavy:
        enum_levels += [(3, 6), (4, 6)]
        feas_levels += [(WeightTuple((7, 5, 3)), 6)]
        scan_cases += [(64, 5)]

    rows: list[tuple[str, float, float]] = []

    for m, n in enum_levels:
        label = f"enumerate m={m} n={n} ({count_configs(m, n)} configs)"
        t_pure = _time(bench_enumeration(pure, m, n), args.repeat)
        t_jit = _time(bench_enumeration(compiled, m, n), args.repeat)
        rows.append((label, t_pure, t_jit))

    for w, n in feas_levels:
        label = f"feasibility s={'+'.join(map(str, w.s))} n={n}"
        t_pure = _time(bench_feasibility(pure, w, n), args.repeat)
        t_jit = _time(bench_feasibility(compiled, w, n), args.repeat)
        rows.append((label, t_pure, t_jit))

    for p, k in scan_cases:
        label = f"subset scan p={p} k={k}"
        t_pure = _time(bench_subset_scan(pure, p, k), args.repeat)
        t_jit = _time(bench_subset_scan(compiled, p, k), args.repeat)
        rows.append((label, t_pure, t_jit))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for label, t_pure, t_jit in rows:
        speed = t_pure / t_jit if t_jit > 0 else float("inf")
        print(f"{label.ljust(width)}  {t_pure:>9.4f}s  {t_jit:>9.4f}s  {speed:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
