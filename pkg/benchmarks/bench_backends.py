#!/usr/bin/env python3
"""Benchmark the grid-search kernels: numba jit vs the pure-numpy fallback.

Runs both search modes on both backends over the worked three-product
instance, checks that all four paths return the identical menu, and
prints a timing table.  The numpy rows are what you get with
``TEMPTMENU_BACKEND=numpy`` (for example on a box where numba wheels are
unavailable).

Usage:
    python benchmarks/bench_backends.py [--step 0.05] [--repeat 3]
"""

import argparse
import os
import time

from temptmenu import (
    Alternative,
    GridSpec,
    PiecewiseLinearCost,
    ProblemInstance,
    grid_best_contract,
)
from temptmenu._kernels import BACKEND_ENV, HAVE_NUMBA, warm_kernels


def worked_instance() -> ProblemInstance:
    return ProblemInstance(
        (
            Alternative("A", 10.0, 10.0, 5.0),
            Alternative("B", 8.0, 14.0, 5.0),
            Alternative("C", 2.0, 16.0, 5.0),
        ),
        PiecewiseLinearCost(l=0.5, k=2.0, w=1.0),
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=0.05,
                    help="price grid step (default 0.05; 401 points on [0, 20])")
    ap.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = ap.parse_args()

    inst = worked_instance()
    grid = GridSpec(price_step=args.step, price_min=0.0, price_max=20.0)
    n_points = len(grid.base_points())
    print(f"grid: {n_points} points per alternative, step {args.step}")
    print(f"env {BACKEND_ENV}={os.environ.get(BACKEND_ENV, '<unset>')}, "
          f"numba importable: {HAVE_NUMBA}")

    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    if HAVE_NUMBA:
        warm_kernels()

    results = {}
    print(f"\n{'mode':<12} {'backend':<8} {'best(s)':>10} {'profit':>10}")
    for mode in ("exhaustive", "bracketed"):
        for backend in backends:
            best = float("inf")
            sol = None
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                sol = grid_best_contract(inst, grid, mode=mode, backend=backend)
                best = min(best, time.perf_counter() - t0)
            key = (sol.profit, tuple(o.price for o in sol.contract.offers))
            results[(mode, backend)] = key
            print(f"{mode:<12} {backend:<8} {best:>10.3f} {sol.profit:>10.6g}")

    distinct = set(results.values())
    if len(distinct) != 1:
        raise SystemExit(f"backends disagree: {results}")
    print("\nall modes and backends returned the identical menu")


if __name__ == "__main__":
    main()
