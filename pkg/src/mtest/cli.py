"""Command-line front end.

Subcommands: calibrate (build a null table), test (run the maximum
Bayes-factor test on a dataset), classic (t or Welch baseline), power
(Type II error sweep to CSV), tables (list a table directory).

Exit codes: 0 success, 2 argument or input-format errors, 3 I/O errors,
4 missing calibration table, 5 degenerate data. The statistical decision
never drives the exit code; scripts must read the report.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import (
    CalibrationKey,
    CalibrationTable,
    TableStore,
    build_table,
    jeffreys_type1,
    load_table,
    p_value,
    save_table,
    threshold,
)
from .core import SamplePair, normalize, summary
from .errors import (
    CorruptTable,
    DegenerateData,
    FormatVersionMismatch,
    InvalidAlpha,
    MissingCalibration,
    MTestError,
    TooFewSamples,
)
from .estimator import (
    BOTH_ALTERNATIVES,
    EstimatorMethod,
    EstimatorSettings,
    MTestResult,
    m_statistic,
)
from .experiments import (
    ALL_DESCRIPTORS,
    PowerScenario,
    parse_descriptor,
    run_power,
    write_averages_csv,
    write_diff_csv,
    write_power_csv,
)
from .models import HypothesisId, PriorVariant
from .reference import t_test, welch_test

REPORT_FORMAT_VERSION = 1


class ConfigError(ValueError):
    """Malformed config file or flag value; maps to exit code 2."""


class DataFormatError(ValueError):
    """Input data file does not match an accepted layout; exit code 2."""


@dataclass(frozen=True)
class Config:
    """Defaults shared by all subcommands; any flag overrides its field."""

    variant: PriorVariant = PriorVariant.MAIN
    alternatives: frozenset = BOTH_ALTERNATIVES
    method: EstimatorMethod = EstimatorMethod.PRIOR_MC
    n_samples: int = 1500
    burn_in: int = 500
    thinning: int = 5
    proposal_scale: float = 0.2
    alpha: float = 0.05
    table_dir: Path = Path("tables")
    workers: int = 1
    seed: int = 0

    def settings(self, seed: int | None = None) -> EstimatorSettings:
        return EstimatorSettings(
            method=self.method,
            n_samples=self.n_samples,
            burn_in=self.burn_in,
            thinning=self.thinning,
            proposal_scale=self.proposal_scale,
            seed=self.seed if seed is None else seed,
        )


def _parse_alternatives(text: str) -> frozenset:
    names = {part.strip().lower() for part in text.split(",") if part.strip()}
    mapping = {"h1": HypothesisId.H1, "h2": HypothesisId.H2}
    unknown = names - set(mapping)
    if unknown or not names:
        raise ConfigError(
            f"alternatives must be a nonempty subset of h1,h2 (got {text!r})"
        )
    return frozenset(mapping[name] for name in names)


def _parse_variant(text: str) -> PriorVariant:
    try:
        return PriorVariant(text.strip().lower())
    except ValueError:
        valid = ", ".join(v.value for v in PriorVariant)
        raise ConfigError(f"unknown variant {text!r}; valid: {valid}") from None


def _parse_method(text: str) -> EstimatorMethod:
    try:
        return EstimatorMethod(text.strip().lower())
    except ValueError:
        valid = ", ".join(m.value for m in EstimatorMethod)
        raise ConfigError(f"unknown method {text!r}; valid: {valid}") from None


_CONFIG_PARSERS = {
    "variant": _parse_variant,
    "alternatives": _parse_alternatives,
    "method": _parse_method,
    "n_samples": int,
    "burn_in": int,
    "thinning": int,
    "proposal_scale": float,
    "alpha": float,
    "table_dir": Path,
    "workers": int,
    "seed": int,
}

_SCENARIO_PARSERS = {
    "n_grid": lambda text: tuple(int(part) for part in text.split(",") if part.strip()),
    "sigma2_grid": lambda text: tuple(
        float(part) for part in text.split(",") if part.strip()
    ),
    "mean_shift": float,
    "reps": int,
    "alpha": float,
    "seed": int,
}


def _parse_kv_lines(text: str, source: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment, blanks ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _apply_schema(raw: dict, parsers: dict, source: str) -> dict:
    unknown = sorted(set(raw) - set(parsers))
    if unknown:
        raise ConfigError(
            f"{source}: unknown keys {', '.join(unknown)}; "
            f"valid: {', '.join(sorted(parsers))}"
        )
    parsed = {}
    for key, value in raw.items():
        try:
            parsed[key] = parsers[key](value)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{source}: bad value for {key}: {exc}") from exc
    return parsed


def load_config(path) -> Config:
    text = Path(path).read_text(encoding="utf-8")
    fields = _apply_schema(_parse_kv_lines(text, str(path)), _CONFIG_PARSERS, str(path))
    try:
        return Config(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def load_scenario(spec: str) -> PowerScenario:
    """Build a PowerScenario from a config file path or the word 'default'."""
    if spec == "default":
        return PowerScenario()
    text = Path(spec).read_text(encoding="utf-8")
    fields = _apply_schema(_parse_kv_lines(text, spec), _SCENARIO_PARSERS, spec)
    try:
        return PowerScenario(**fields)
    except ValueError as exc:
        raise ConfigError(f"{spec}: {exc}") from exc


def parse_data_file(path) -> SamplePair:
    """Read a two-group dataset.

    Accepted layouts, with no inference beyond them:
    - CSV with the exact header ``group,value``, group in {1, 2};
    - plain text with exactly two nonempty lines, one group per line,
      values whitespace-separated.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise DataFormatError(f"{path}: empty data file")
    if lines[0].replace(" ", "") == "group,value":
        groups: dict = {1: [], 2: []}
        for lineno, line in enumerate(lines[1:], start=2):
            parts = [part.strip() for part in line.split(",")]
            if len(parts) != 2:
                raise DataFormatError(f"{path}:{lineno}: expected 'group,value' row")
            try:
                group = int(parts[0])
                value = float(parts[1])
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
            if group not in (1, 2):
                raise DataFormatError(f"{path}:{lineno}: group must be 1 or 2")
            groups[group].append(value)
        y1, y2 = groups[1], groups[2]
    else:
        if len(lines) != 2:
            raise DataFormatError(
                f"{path}: plain-text layout needs exactly two nonempty lines"
            )
        try:
            y1 = [float(part) for part in lines[0].split()]
            y2 = [float(part) for part in lines[1].split()]
        except ValueError as exc:
            raise DataFormatError(f"{path}: {exc}") from exc
    try:
        return SamplePair(y1=np.asarray(y1, float), y2=np.asarray(y2, float))
    except TooFewSamples as exc:
        raise TooFewSamples(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class TestReport:
    """Everything a reader needs to audit one test decision."""

    n1: int
    n2: int
    group1_mean: float
    group1_sd: float
    group2_mean: float
    group2_sd: float
    result: MTestResult
    threshold: float
    p_value: float
    alpha: float
    table_key: CalibrationKey
    table_runs: int
    table_seed: int
    version: str = __version__
    decision: bool = dataclasses.field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "decision", self.result.m > self.threshold)

    def to_dict(self) -> dict:
        key = self.table_key
        return {
            "report_format_version": REPORT_FORMAT_VERSION,
            "tool_version": self.version,
            "data": {
                "n1": self.n1,
                "n2": self.n2,
                "group1": {"mean": self.group1_mean, "sd": self.group1_sd},
                "group2": {"mean": self.group2_mean, "sd": self.group2_sd},
            },
            "estimator": {
                "method": self.result.settings.method.value,
                "n_samples": self.result.settings.n_samples,
                "seed": self.result.settings.seed,
            },
            "prior_variant": self.result.prior_variant.value,
            "log_marginals": {
                h.name: lm for h, lm in sorted(
                    self.result.log_marginals.items(), key=lambda kv: kv[0].value
                )
            },
            "bayes_factors": {
                h.name: bf for h, bf in sorted(
                    self.result.bayes_factors.items(), key=lambda kv: kv[0].value
                )
            },
            "m": self.result.m,
            "table": {
                "n1": key.n1,
                "n2": key.n2,
                "variant": key.variant.value,
                "alternatives": sorted(h.name for h in key.alternatives),
                "n_mc_samples": key.n_mc_samples,
                "runs": self.table_runs,
                "generator_seed": self.table_seed,
            },
            "alpha": self.alpha,
            "threshold": self.threshold,
            "p_value": self.p_value,
            "decision": "reject" if self.decision else "do not reject",
        }

    def render(self) -> str:
        lines = [
            f"m-test report (mtest {self.version})",
            f"data: n1={self.n1}, n2={self.n2}",
            f"  group 1: mean={self.group1_mean:.6g}, sd={self.group1_sd:.6g}",
            f"  group 2: mean={self.group2_mean:.6g}, sd={self.group2_sd:.6g}",
            f"prior variant: {self.result.prior_variant.value}; "
            f"alternatives: {self.table_key.alternatives_label}",
            f"estimator: {self.result.settings.method.value}, "
            f"n_samples={self.result.settings.n_samples}, "
            f"seed={self.result.settings.seed}",
        ]
        for h in sorted(self.result.log_marginals, key=lambda h: h.value):
            lines.append(f"  log P(y|{h.name}) = {self.result.log_marginals[h]:.6f}")
        for h in sorted(self.result.bayes_factors, key=lambda h: h.value):
            lines.append(f"  bayes factor {h.name} = {self.result.bayes_factors[h]:.6g}")
        lines += [
            f"m = {self.result.m:.6g}",
            f"table: runs={self.table_runs}, generator_seed={self.table_seed}",
            f"threshold(alpha={self.alpha:g}) = {self.threshold:.6g}",
            f"p-value = {self.p_value:.6g}",
            f"decision: {'reject H0' if self.decision else 'do not reject H0'}",
        ]
        return "\n".join(lines)


def _print_table_summary(table: CalibrationTable) -> None:
    key = table.key
    print(
        f"table: n1={key.n1} n2={key.n2} variant={key.variant.value} "
        f"alternatives={key.alternatives_label} n_mc_samples={key.n_mc_samples}"
    )
    print(f"runs={table.runs} generator_seed={table.generator_seed}")
    for alpha in (0.05, 0.01):
        print(f"threshold(alpha={alpha:.2f}) = {threshold(table, alpha):.4f}")
    fractions = jeffreys_type1(table)
    parts = ", ".join(f"m>{cutoff}: {frac:.4f}" for cutoff, frac in fractions.items())
    print(f"Type I at evidence cutoffs: {parts}")


def cmd_calibrate(args) -> int:
    config = args.config
    key = CalibrationKey(
        n1=args.n1,
        n2=args.n2,
        variant=args.variant or config.variant,
        alternatives=args.alternatives or config.alternatives,
        n_mc_samples=args.n_samples or config.n_samples,
    )
    seed = config.seed if args.seed is None else args.seed
    workers = args.workers or config.workers
    table = build_table(key, runs=args.runs, seed=seed, workers=workers)
    save_table(table, args.out)
    print(f"wrote {args.out}")
    _print_table_summary(table)
    return 0


def _resolve_table(args, config, key: CalibrationKey) -> CalibrationTable:
    if args.table is not None:
        table = load_table(args.table)
        if table.key != key:
            raise MissingCalibration(
                f"{args.table} holds {table.key}, but the data and flags need {key}"
            )
        return table
    store = TableStore(
        args.tables or config.table_dir,
        auto_build=args.auto_calibrate,
        build_runs=args.runs,
        build_seed=config.seed,
        workers=args.workers or config.workers,
    )
    return store.lookup(key)


def cmd_test(args) -> int:
    config = args.config
    pair = parse_data_file(args.data)
    normalize(pair)  # degenerate data must fail here, not at table lookup
    variant = args.variant or config.variant
    alternatives = args.alternatives or config.alternatives
    n_samples = args.n_samples or config.n_samples
    alpha = config.alpha if args.alpha is None else args.alpha
    key = CalibrationKey(
        n1=pair.n1,
        n2=pair.n2,
        variant=variant,
        alternatives=alternatives,
        n_mc_samples=n_samples,
    )
    table = _resolve_table(args, config, key)
    seed = config.seed if args.seed is None else args.seed
    settings = dataclasses.replace(
        config.settings(seed), method=args.method or config.method, n_samples=n_samples
    )
    result = m_statistic(pair, variant, settings, alternatives)
    stats1, stats2 = summary(pair.y1), summary(pair.y2)
    report = TestReport(
        n1=pair.n1,
        n2=pair.n2,
        group1_mean=stats1.mean,
        group1_sd=stats1.sd,
        group2_mean=stats2.mean,
        group2_sd=stats2.sd,
        result=result,
        threshold=threshold(table, alpha),
        p_value=p_value(table, result.m),
        alpha=alpha,
        table_key=table.key,
        table_runs=table.runs,
        table_seed=table.generator_seed,
    )
    print(report.render())
    if args.report is not None:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0


def cmd_classic(args) -> int:
    config = args.config
    pair = parse_data_file(args.data)
    alpha = config.alpha if args.alpha is None else args.alpha
    run = t_test if args.test == "t" else welch_test
    result = run(pair, alpha)
    print(f"test: {result.test.value}")
    print(f"statistic = {result.statistic:.6g}")
    print(f"df = {result.df:.6g}")
    print(f"p-value = {result.p_value:.6g}")
    print(
        f"decision at alpha={alpha:g}: "
        f"{'reject H0' if result.reject else 'do not reject H0'}"
    )
    return 0


def cmd_power(args) -> int:
    config = args.config
    scenario = load_scenario(args.scenario)
    tests = [part.strip() for part in args.tests.split(",") if part.strip()]
    for text in tests:
        parse_descriptor(text)
    if "t" not in tests:
        tests.insert(0, "t")
    workers = args.workers or config.workers
    store = TableStore(
        args.tables or config.table_dir,
        auto_build=args.auto_calibrate,
        build_runs=args.runs,
        build_seed=config.seed,
        workers=workers,
    )
    n_samples = args.n_samples or config.n_samples
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    grids = []
    for text in tests:
        grids.append(run_power(scenario, text, store, n_samples, workers))
        print(f"ran {text}", file=sys.stderr)
    baseline = next(grid for grid in grids if grid.test_id == "t")
    write_power_csv(grids, out_dir / "power.csv")
    write_diff_csv(baseline, grids, out_dir / "diff.csv")
    write_averages_csv(baseline, grids, out_dir / "averages.csv")
    print(f"wrote {out_dir / 'power.csv'}")
    print(f"wrote {out_dir / 'diff.csv'}")
    print(f"wrote {out_dir / 'averages.csv'}")
    return 0


def cmd_tables(args) -> int:
    config = args.config
    directory = Path(args.tables or config.table_dir)
    if not directory.is_dir():
        print(f"no table directory at {directory}")
        return 0
    rows = []
    for path in sorted(directory.glob("*.json")):
        try:
            table = load_table(path)
        except MTestError as exc:
            rows.append(f"{path.name}: unreadable ({exc})")
            continue
        key = table.key
        rows.append(
            f"{path.name}: n1={key.n1} n2={key.n2} variant={key.variant.value} "
            f"alternatives={key.alternatives_label} n_mc_samples={key.n_mc_samples} "
            f"runs={table.runs} threshold(0.05)={threshold(table, 0.05):.4f}"
        )
    if not rows:
        print(f"no tables in {directory}")
    for row in rows:
        print(row)
    return 0


class _ConfigAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, load_config(values))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        action=_ConfigAction,
        default=Config(),
        metavar="FILE",
        help="key = value config file supplying defaults for the flags below",
    )
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel worker processes")
    parser.add_argument("--seed", type=int, default=None, help="base seed")


def _add_estimator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--variant", type=_parse_variant, default=None,
                        help="prior variant: main, informative, noninformative")
    parser.add_argument("--alternatives", type=_parse_alternatives, default=None,
                        help="comma list from {h1, h2}")
    parser.add_argument("--n-samples", type=int, default=None, dest="n_samples",
                        help="Monte Carlo samples per hypothesis")


def _add_table_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tables", default=None, metavar="DIR",
                        help="calibration table directory")
    parser.add_argument("--auto-calibrate", action="store_true",
                        help="build missing tables on demand")
    parser.add_argument("--runs", type=int, default=20_000,
                        help="runs for newly built tables")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtest",
        description="Two-sample testing with a calibrated maximum Bayes factor.",
    )
    parser.add_argument("--version", action="version", version=f"mtest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    cal = sub.add_parser("calibrate", help="simulate a null table and save it")
    cal.add_argument("--n1", type=int, required=True)
    cal.add_argument("--n2", type=int, required=True)
    cal.add_argument("--runs", type=int, default=20_000)
    cal.add_argument("--out", required=True, metavar="PATH")
    _add_estimator_flags(cal)
    _add_common(cal)
    cal.set_defaults(func=cmd_calibrate)

    tst = sub.add_parser("test", help="run the m-test on a dataset")
    tst.add_argument("--data", required=True, metavar="FILE")
    tst.add_argument("--table", default=None, metavar="FILE",
                     help="explicit table file (otherwise looked up in --tables)")
    tst.add_argument("--alpha", type=float, default=None)
    tst.add_argument("--method", type=_parse_method, default=None,
                     help="prior_mc or posterior_harmonic_mean")
    tst.add_argument("--report", default=None, metavar="FILE",
                     help="also write the report as JSON")
    _add_estimator_flags(tst)
    _add_table_flags(tst)
    _add_common(tst)
    tst.set_defaults(func=cmd_test)

    cls = sub.add_parser("classic", help="classical baseline test")
    cls.add_argument("--data", required=True, metavar="FILE")
    cls.add_argument("--test", choices=("t", "welch"), default="t")
    cls.add_argument("--alpha", type=float, default=None)
    _add_common(cls)
    cls.set_defaults(func=cmd_classic)

    pwr = sub.add_parser("power", help="Type II error sweep, written as CSV")
    pwr.add_argument("--scenario", default="default", metavar="FILE",
                     help="scenario config file, or 'default'")
    pwr.add_argument("--tests", default="t,welch,mtest:main",
                     help=f"comma list of descriptors from: {', '.join(ALL_DESCRIPTORS)}")
    pwr.add_argument("--out", required=True, metavar="DIR")
    _add_estimator_flags(pwr)
    _add_table_flags(pwr)
    _add_common(pwr)
    pwr.set_defaults(func=cmd_power)

    tbl = sub.add_parser("tables", help="list calibration tables")
    tbl.add_argument("--tables", default=None, metavar="DIR")
    _add_common(tbl)
    tbl.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except (ConfigError, OSError) as exc:
        print(f"mtest: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ConfigError, DataFormatError, InvalidAlpha, ValueError) as exc:
        print(f"mtest: {exc}", file=sys.stderr)
        return 2
    except MissingCalibration as exc:
        print(f"mtest: {exc}", file=sys.stderr)
        return 4
    except (DegenerateData, TooFewSamples) as exc:
        print(f"mtest: degenerate data: {exc}", file=sys.stderr)
        return 5
    except (CorruptTable, FormatVersionMismatch, OSError) as exc:
        print(f"mtest: {exc}", file=sys.stderr)
        return 3
    except MTestError as exc:
        print(f"mtest: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
