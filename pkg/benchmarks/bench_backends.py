"""Throughput of the compiled kernel against the pure-Python engine.

    python benchmarks/bench_backends.py --runs 2000

Both backends simulate the same runs of all nine designs; the script checks
that their tallies agree exactly before reporting timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from handball_sim import backend
from handball_sim.formats import standard_designs
from handball_sim.strength import probability_matrix


def timed(name: str, designs, matrix, seed: int, runs: int, repeat: int):
    best, tallies = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        tallies = backend.run_block(designs, matrix, seed, 0, runs, name)
        best = min(best, time.perf_counter() - t0)
    return best, tallies


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--runs", type=int, default=2_000, help="runs per backend (default 2000)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=3, help="best of this many timings")
    args = parser.parse_args()

    designs = standard_designs()
    matrix = probability_matrix()
    cells = args.runs * len(designs)
    results = {}
    for name in backend.AVAILABLE:
        seconds, tallies = timed(name, designs, matrix, args.seed, args.runs, args.repeat)
        results[name] = (seconds, tallies)
        print(f"{name:>7}: {seconds:8.3f} s  {cells / seconds:12,.0f} design-runs/s  "
              f"{1e6 * seconds / cells:9.2f} us per design-run")

    if len(results) == 2:
        (t_c, a), (t_p, b) = results["cython"], results["python"]
        same = all(
            np.array_equal(getattr(x, f), getattr(y, f))
            for x, y in zip(a, b)
            for f in ("place_counts", "final_pairs", "semifinalists", "semifinal_pairs")
        )
        print(f"speedup: {t_p / t_c:.0f}x, tallies identical: {same}")
    else:
        print("compiled kernel not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
