"""Type II error sweep: calibrated maximum-Bayes-factor test vs baselines.

Runs each requested test over the (n, sigma2) scenario grid and writes
power.csv (per-cell Type II), diff.csv (per-cell t minus other), and
averages.csv (trapezoid-averaged differences). Desk scale by default:
5,000 replicates and 20,000-run tables. Missing tables are built on the
fly into --tables.
"""
import argparse
import sys
import time
from pathlib import Path

from mtest.calibration import TableStore
from mtest.experiments import (
    ALL_DESCRIPTORS,
    PowerScenario,
    parse_descriptor,
    run_power,
    write_averages_csv,
    write_diff_csv,
    write_power_csv,
)


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/power", metavar="DIR")
    parser.add_argument("--tables", default="tables", metavar="DIR")
    parser.add_argument("--tests", nargs="+", default=["t", "welch", "mtest:main"],
                        choices=list(ALL_DESCRIPTORS))
    parser.add_argument("--n", type=int, nargs="+",
                        default=[3, 4, 5, 10, 20, 50, 100])
    parser.add_argument("--sigma2", type=float, nargs="+",
                        default=[0.25, 0.5, 1.0, 1.5, 2.0])
    parser.add_argument("--mean-shift", type=float, default=1.0)
    parser.add_argument("--reps", type=int, default=5000)
    parser.add_argument("--alpha", type=float, default=0.05)
    parser.add_argument("--runs", type=int, default=20_000,
                        help="runs for tables built on demand")
    parser.add_argument("--n-samples", type=int, default=1500, dest="n_samples")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    tests = list(dict.fromkeys(args.tests))
    if "t" not in tests:
        tests.insert(0, "t")
    for text in tests:
        parse_descriptor(text)
    scenario = PowerScenario(
        n_grid=tuple(args.n),
        sigma2_grid=tuple(args.sigma2),
        mean_shift=args.mean_shift,
        reps=args.reps,
        alpha=args.alpha,
        seed=args.seed,
    )
    store = TableStore(
        args.tables,
        auto_build=True,
        build_runs=args.runs,
        build_seed=args.seed,
        workers=args.workers,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    grids = []
    for text in tests:
        start = time.perf_counter()
        grids.append(run_power(scenario, text, store, args.n_samples, args.workers))
        print(f"{text}: {time.perf_counter() - start:.1f}s", file=sys.stderr)
    baseline = next(grid for grid in grids if grid.test_id == "t")
    write_power_csv(grids, out_dir / "power.csv")
    write_diff_csv(baseline, grids, out_dir / "diff.csv")
    write_averages_csv(baseline, grids, out_dir / "averages.csv")
    for name in ("power.csv", "diff.csv", "averages.csv"):
        print(f"wrote {out_dir / name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
