"""Build the standard ladder of null calibration tables.

Desk scale by default (20,000 runs per table, minutes of compute); raise
--runs for production-grade thresholds. Tables land in --tables under
canonical names, so `mtest test --tables DIR` and the study scripts find
them without flags. Existing files are kept unless --force is given.
"""
import argparse
import sys
from pathlib import Path

from mtest.calibration import (
    CalibrationKey,
    build_table,
    jeffreys_type1,
    save_table,
    threshold,
)
from mtest.estimator import BOTH_ALTERNATIVES
from mtest.models import HypothesisId, PriorVariant
from mtest.seeding import derive_seed

DEFAULT_N = (3, 4, 5, 10, 20, 50, 100)

ALTERNATIVE_SETS = {
    "h1+h2": BOTH_ALTERNATIVES,
    "h1": frozenset({HypothesisId.H1}),
    "h2": frozenset({HypothesisId.H2}),
}


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tables", default="tables", metavar="DIR")
    parser.add_argument("--runs", type=int, default=20_000)
    parser.add_argument("--n-samples", type=int, default=1500, dest="n_samples")
    parser.add_argument("--n", type=int, nargs="+", default=list(DEFAULT_N),
                        help="group sizes (N1 = N2 = n)")
    parser.add_argument("--variants", nargs="+",
                        default=[v.value for v in PriorVariant],
                        choices=[v.value for v in PriorVariant])
    parser.add_argument("--alternatives", nargs="+", default=["h1+h2"],
                        choices=sorted(ALTERNATIVE_SETS),
                        help="alternative subsets; each gets its own table")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--force", action="store_true",
                        help="rebuild tables that already exist")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    directory = Path(args.tables)
    directory.mkdir(parents=True, exist_ok=True)
    keys = [
        CalibrationKey(
            n1=n,
            n2=n,
            variant=PriorVariant(variant),
            alternatives=ALTERNATIVE_SETS[alt],
            n_mc_samples=args.n_samples,
        )
        for variant in args.variants
        for alt in args.alternatives
        for n in args.n
    ]
    for key in keys:
        path = directory / key.file_name()
        if path.is_file() and not args.force:
            print(f"kept {path}")
            continue
        seed = derive_seed(args.seed, *key.seed_tag())
        table = build_table(key, runs=args.runs, seed=seed, workers=args.workers)
        save_table(table, path)
        cutoffs = ", ".join(
            f"m>{c}: {frac:.3f}" for c, frac in jeffreys_type1(table).items()
        )
        print(
            f"wrote {path}  threshold(0.05)={threshold(table, 0.05):.3f}  {cutoffs}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
