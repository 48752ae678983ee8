#!/usr/bin/env python3
"""Time the growth kernels, pure Python against the compiled extension.

Runs the same seeded workload through every available kernel flavor and
reports wall time, attempt throughput, and the speedup of the compiled
path.  Both flavors consume the identical random stream, so the script
also cross-checks that their run totals agree bit for bit before timing
anything; a benchmark of two kernels that disagree would be noise.

Usage::

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --p 0.45 --target-edges 2000 --runs 50
"""

from __future__ import annotations

import argparse
import time

from graphforge._kernel import COMPILED, implementations
from graphforge.eo import EoModel
from graphforge.strategies import run_s1, run_s2

_RUNNERS = {"s1": run_s1, "s2": run_s2}
_LANES = {"s1": 0, "s2": 1}


def workload(strategy: str, flavor: str, p: float, target_edges: int,
             runs: int, seed: int):
    runner = _RUNNERS[strategy]
    attempts = 0
    edges = 0
    start = time.perf_counter()
    for i in range(runs):
        model = EoModel.for_run(p, seed, i, lane=_LANES[strategy])
        summary = runner(model, target_edges, backend=flavor)
        attempts += summary.attempts
        edges += summary.net_edges
    wall = time.perf_counter() - start
    return attempts, edges, wall


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--target-edges", type=int, default=1000, dest="target_edges")
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repetitions; the best is reported")
    args = ap.parse_args()

    flavors = [name for name, _ in implementations()]
    print(f"kernel flavors available: {', '.join(flavors)}"
          + ("" if COMPILED else "  (compiled extension not built)"))
    print(f"workload: p={args.p}, target_edges={args.target_edges}, "
          f"runs={args.runs}, seed={args.seed}\n")

    header = f"{'strategy':<10}{'flavor':<12}{'attempts':>12}{'wall':>10}{'Mattempt/s':>13}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for strategy in ("s1", "s2"):
        totals = {}
        base_rate = None
        for flavor in flavors:
            best = None
            for _ in range(args.repeat):
                attempts, edges, wall = workload(
                    strategy, flavor, args.p, args.target_edges, args.runs, args.seed)
                totals[flavor] = (attempts, edges)
                best = wall if best is None else min(best, wall)
            rate = attempts / best / 1e6
            if base_rate is None:
                base_rate = rate
                speedup = ""
            else:
                speedup = f"{rate / base_rate:7.1f}x"
            print(f"{strategy:<10}{flavor:<12}{attempts:>12}{best:>9.3f}s"
                  f"{rate:>13.2f}{speedup:>9}")
        if len(totals) > 1 and len(set(totals.values())) != 1:
            print(f"!! {strategy}: flavors disagree on run totals {totals}")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
