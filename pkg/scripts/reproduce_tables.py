"""Run grid baseline vs orienteering on every shipped benchmark setting.

    python scripts/reproduce_tables.py [--out results/] [--tune] [--jobs N]

Writes one results CSV per setting and prints the wins summary
(grid search vs orienteering) in the layout of the published summary table.
"""

import argparse
import time
from pathlib import Path

from seaexplore.benchmarks import NAMES, SETTINGS
from seaexplore.cli import write_atomic
from seaexplore.harness import compare, format_table
from seaexplore.instance import load_instance
from seaexplore.planner import PlannerConfig

ROOT = Path(__file__).resolve().parents[1]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bench", type=Path, default=ROOT / "bench")
    parser.add_argument("--out", type=Path, default=ROOT / "results")
    parser.add_argument("--tune", action="store_true", help="tune kernel parameters per instance")
    parser.add_argument("--grid-k", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    config = PlannerConfig(grid_k=args.grid_k, grid_l=args.grid_k, tune=args.tune)
    summary = []
    for label, _, _ in SETTINGS:
        start = time.perf_counter()
        named = [(f"{n}_{label}", load_instance(args.bench / label / f"{n}_{label}.inst")) for n in NAMES]
        table = compare(named, config, jobs=args.jobs)
        write_atomic(str(args.out / f"{label}.csv"), format_table(table))
        summary.append((label, *table.wins))
        print(f"{label}: wins grid={table.wins[0]} orienteering={table.wins[1]} ({time.perf_counter() - start:.1f}s)")

    print()
    print(f"{'Benchmarks':<12}{'Grid search':>12}{'Orienteering':>14}")
    for label, grid, orient in summary:
        print(f"{label:<12}{grid:>12}{orient:>14}")


if __name__ == "__main__":
    main()
