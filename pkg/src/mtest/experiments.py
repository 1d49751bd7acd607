"""Power study: Type II error surfaces and test-vs-test comparisons.

Group 1 is drawn from a standard normal and group 2 from
Normal(mean_shift, sigma2^2) over a grid of sample sizes and sigma2 values;
each test's Type II error is the fraction of replicates where the null is
not rejected. All tests see identical datasets: the data substream for a
replicate depends only on (scenario seed, n, sigma2 index, replicate), so
differences between tests are paired and free of independent-sampling noise.

Setting mean_shift = 0 and sigma2 = 1 turns the recorded quantity into
1 - Type I, which is how calibration exactness is checked.
"""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .calibration import CalibrationKey, TableStore, threshold
from .core import SamplePair
from .errors import GridTooSparse, MissingCalibration, ScenarioMismatch
from .estimator import BOTH_ALTERNATIVES, EstimatorSettings, m_statistic
from .models import HypothesisId, PriorVariant
from .reference import ClassicalTest, t_test, welch_test
from .seeding import DATA_STREAM, ESTIMATOR_STREAM, derive_seed, substream

DEFAULT_N_GRID = (3, 4, 5, 10, 20, 50, 100)
DEFAULT_SIGMA2_GRID = (0.25, 0.5, 1.0, 1.5, 2.0)
TRAPEZOID_RANGE = (3, 50)


@dataclass(frozen=True)
class TestDescriptor:
    """Parsed form of a test name like "welch" or "mtest:h1"."""

    text: str
    classic: ClassicalTest | None = None
    variant: PriorVariant | None = None
    alternatives: frozenset | None = None

    @property
    def needs_table(self) -> bool:
        return self.classic is None

    def variant_label(self) -> str:
        return "" if self.classic is not None else self.variant.value


_DESCRIPTORS = {
    "t": TestDescriptor("t", classic=ClassicalTest.STUDENT_T),
    "welch": TestDescriptor("welch", classic=ClassicalTest.WELCH_T),
    "mtest:main": TestDescriptor(
        "mtest:main", variant=PriorVariant.MAIN, alternatives=BOTH_ALTERNATIVES
    ),
    "mtest:h1": TestDescriptor(
        "mtest:h1",
        variant=PriorVariant.MAIN,
        alternatives=frozenset({HypothesisId.H1}),
    ),
    "mtest:h2": TestDescriptor(
        "mtest:h2",
        variant=PriorVariant.MAIN,
        alternatives=frozenset({HypothesisId.H2}),
    ),
    "mtest:informative": TestDescriptor(
        "mtest:informative",
        variant=PriorVariant.INFORMATIVE,
        alternatives=BOTH_ALTERNATIVES,
    ),
    "mtest:noninformative": TestDescriptor(
        "mtest:noninformative",
        variant=PriorVariant.NONINFORMATIVE,
        alternatives=BOTH_ALTERNATIVES,
    ),
}

ALL_DESCRIPTORS = tuple(_DESCRIPTORS)


def parse_descriptor(text: str) -> TestDescriptor:
    try:
        return _DESCRIPTORS[text]
    except KeyError:
        raise ValueError(
            f"unknown test descriptor {text!r}; valid: {', '.join(ALL_DESCRIPTORS)}"
        ) from None


@dataclass(frozen=True)
class PowerScenario:
    """Simulation design for one power sweep."""

    n_grid: tuple = DEFAULT_N_GRID
    sigma2_grid: tuple = DEFAULT_SIGMA2_GRID
    mean_shift: float = 1.0
    reps: int = 5000
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        n_grid = tuple(int(n) for n in self.n_grid)
        sigma2_grid = tuple(float(s) for s in self.sigma2_grid)
        if not n_grid or not sigma2_grid:
            raise ValueError("grids must be nonempty")
        if any(n < 2 for n in n_grid) or list(n_grid) != sorted(set(n_grid)):
            raise ValueError("n_grid must be strictly ascending integers >= 2")
        if any(s <= 0 for s in sigma2_grid):
            raise ValueError("sigma2_grid entries must be positive")
        if self.reps < 100:
            raise ValueError("reps must be at least 100")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        object.__setattr__(self, "n_grid", n_grid)
        object.__setattr__(self, "sigma2_grid", sigma2_grid)
        object.__setattr__(self, "mean_shift", float(self.mean_shift))


@dataclass(frozen=True)
class PowerGrid:
    """Type II error of one test over a scenario's (n, sigma2) grid."""

    scenario: PowerScenario
    test_id: str
    type2: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.type2, dtype=float).copy()
        arr.setflags(write=False)
        shape = (len(self.scenario.n_grid), len(self.scenario.sigma2_grid))
        if arr.shape != shape:
            raise ValueError(f"type2 must have shape {shape}")
        if np.any((arr < 0) | (arr > 1)):
            raise ValueError("type2 entries must lie in [0, 1]")
        object.__setattr__(self, "type2", arr)

    def curve(self, j: int) -> dict:
        """Type II as a map n -> value at the j-th sigma2."""
        return {n: float(self.type2[i, j]) for i, n in enumerate(self.scenario.n_grid)}


def _replicate_pair(scenario: PowerScenario, n: int, j: int, rep: int) -> SamplePair:
    rng = substream(scenario.seed, n, j, rep, DATA_STREAM)
    y1 = rng.standard_normal(n)
    y2 = scenario.mean_shift + scenario.sigma2_grid[j] * rng.standard_normal(n)
    return SamplePair(y1=y1, y2=y2)


def _cell_nonrejections(
    scenario: PowerScenario,
    descriptor_text: str,
    n: int,
    j: int,
    m_threshold: float,
    n_mc_samples: int,
) -> int:
    desc = parse_descriptor(descriptor_text)
    keep = 0
    for rep in range(scenario.reps):
        pair = _replicate_pair(scenario, n, j, rep)
        if desc.classic is ClassicalTest.STUDENT_T:
            rejected = t_test(pair, scenario.alpha).reject
        elif desc.classic is ClassicalTest.WELCH_T:
            rejected = welch_test(pair, scenario.alpha).reject
        else:
            settings = EstimatorSettings(
                n_samples=n_mc_samples,
                seed=derive_seed(scenario.seed, n, j, rep, ESTIMATOR_STREAM),
            )
            result = m_statistic(pair, desc.variant, settings, desc.alternatives)
            rejected = result.m > m_threshold
        keep += not rejected
    return keep


def run_power(
    scenario: PowerScenario,
    test: str,
    store: TableStore | None = None,
    n_mc_samples: int = 1500,
    workers: int = 1,
) -> PowerGrid:
    """Type II error of one test over the scenario grid.

    For m-test descriptors every (n, n) needs a calibration table in the
    store; tables are resolved up front (building them here if the store
    auto-builds) and only their thresholds enter the replicate loop.
    """
    desc = parse_descriptor(test)
    thresholds = {}
    if desc.needs_table:
        if store is None:
            raise MissingCalibration(f"test {test!r} needs a calibration table store")
        for n in scenario.n_grid:
            key = CalibrationKey(
                n1=n,
                n2=n,
                variant=desc.variant,
                alternatives=desc.alternatives,
                n_mc_samples=n_mc_samples,
            )
            thresholds[n] = threshold(store.lookup(key), scenario.alpha)
    cells = [
        (i, j, n)
        for i, n in enumerate(scenario.n_grid)
        for j in range(len(scenario.sigma2_grid))
    ]
    type2 = np.empty((len(scenario.n_grid), len(scenario.sigma2_grid)))
    if workers == 1:
        for i, j, n in cells:
            keep = _cell_nonrejections(
                scenario, test, n, j, thresholds.get(n, 0.0), n_mc_samples
            )
            type2[i, j] = keep / scenario.reps
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(
                    _cell_nonrejections,
                    scenario,
                    test,
                    n,
                    j,
                    thresholds.get(n, 0.0),
                    n_mc_samples,
                ): (i, j)
                for i, j, n in cells
            }
            for future, (i, j) in futures.items():
                type2[i, j] = future.result() / scenario.reps
    return PowerGrid(scenario=scenario, test_id=test, type2=type2)


def diff_grid(a: PowerGrid, b: PowerGrid) -> np.ndarray:
    """Elementwise a - b; positive entries mean b commits fewer errors."""
    if a.scenario != b.scenario:
        raise ScenarioMismatch("grids come from different scenarios")
    return np.asarray(a.type2 - b.type2)


def trapezoid_average(curve: dict, n_lo: int, n_hi: int) -> float:
    """Mean of the piecewise-linear interpolant of curve over [n_lo, n_hi]."""
    if n_lo >= n_hi:
        raise ValueError("need n_lo < n_hi")
    xs = np.array(sorted(curve), dtype=float)
    ys = np.array([curve[x] for x in sorted(curve)], dtype=float)
    if n_lo < xs[0] or n_hi > xs[-1]:
        raise GridTooSparse(f"curve does not cover [{n_lo}, {n_hi}]")
    inside = (xs >= n_lo) & (xs <= n_hi)
    if int(inside.sum()) < 2:
        raise GridTooSparse(f"fewer than 2 grid points inside [{n_lo}, {n_hi}]")
    strict = (xs > n_lo) & (xs < n_hi)
    grid = np.concatenate([[n_lo], xs[strict], [n_hi]])
    values = np.interp(grid, xs, ys)
    area = np.sum(np.diff(grid) * (values[1:] + values[:-1]) / 2.0)
    return float(area / (n_hi - n_lo))


def averaged_differences(
    baseline: PowerGrid,
    other: PowerGrid,
    n_lo: int = TRAPEZOID_RANGE[0],
    n_hi: int = TRAPEZOID_RANGE[1],
) -> dict:
    """Per-sigma2 trapezoid average of (baseline - other) Type II curves."""
    diff = diff_grid(baseline, other)
    out = {}
    for j, sigma2 in enumerate(baseline.scenario.sigma2_grid):
        curve = {n: float(diff[i, j]) for i, n in enumerate(baseline.scenario.n_grid)}
        out[sigma2] = trapezoid_average(curve, n_lo, n_hi)
    return out


def _comparison_study(
    scenario: PowerScenario,
    descriptors: tuple,
    store: TableStore,
    n_mc_samples: int,
    workers: int,
    n_lo: int,
    n_hi: int,
) -> dict:
    baseline = run_power(scenario, "t", workers=workers)
    return {
        text: averaged_differences(
            baseline,
            run_power(scenario, text, store, n_mc_samples, workers),
            n_lo,
            n_hi,
        )
        for text in descriptors
    }


def ablation_study(
    scenario: PowerScenario,
    store: TableStore,
    n_mc_samples: int = 1500,
    workers: int = 1,
    n_lo: int = TRAPEZOID_RANGE[0],
    n_hi: int = TRAPEZOID_RANGE[1],
) -> dict:
    """Averaged advantage over the t-test with both alternatives, H1 only,
    and H2 only, each rejecting at its own recalibrated threshold."""
    return _comparison_study(
        scenario,
        ("mtest:main", "mtest:h1", "mtest:h2"),
        store,
        n_mc_samples,
        workers,
        n_lo,
        n_hi,
    )


def prior_variant_study(
    scenario: PowerScenario,
    store: TableStore,
    n_mc_samples: int = 1500,
    workers: int = 1,
    n_lo: int = TRAPEZOID_RANGE[0],
    n_hi: int = TRAPEZOID_RANGE[1],
) -> dict:
    """Averaged advantage over the t-test for the three prior variants."""
    return _comparison_study(
        scenario,
        ("mtest:main", "mtest:informative", "mtest:noninformative"),
        store,
        n_mc_samples,
        workers,
        n_lo,
        n_hi,
    )


def write_power_csv(grids, path) -> None:
    """One row per (test, n, sigma2) cell: the tidy long format."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["test", "variant", "n", "sigma2", "type2", "reps", "seed"])
        for grid in grids:
            desc = parse_descriptor(grid.test_id)
            sc = grid.scenario
            for i, n in enumerate(sc.n_grid):
                for j, sigma2 in enumerate(sc.sigma2_grid):
                    writer.writerow(
                        [
                            grid.test_id,
                            desc.variant_label(),
                            n,
                            f"{sigma2:g}",
                            f"{grid.type2[i, j]:.6f}",
                            sc.reps,
                            sc.seed,
                        ]
                    )


def write_diff_csv(baseline: PowerGrid, grids, path) -> None:
    """Per-cell (baseline - other) differences against one baseline test."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["baseline", "test", "variant", "n", "sigma2", "diff", "reps", "seed"]
        )
        for grid in grids:
            if grid.test_id == baseline.test_id:
                continue
            diff = diff_grid(baseline, grid)
            desc = parse_descriptor(grid.test_id)
            sc = grid.scenario
            for i, n in enumerate(sc.n_grid):
                for j, sigma2 in enumerate(sc.sigma2_grid):
                    writer.writerow(
                        [
                            baseline.test_id,
                            grid.test_id,
                            desc.variant_label(),
                            n,
                            f"{sigma2:g}",
                            f"{diff[i, j]:.6f}",
                            sc.reps,
                            sc.seed,
                        ]
                    )


def write_averages_csv(baseline: PowerGrid, grids, path, n_lo=None, n_hi=None) -> None:
    """Trapezoid-averaged per-sigma2 differences against one baseline test.

    The averaging window defaults to the standard range clipped to the
    scenario's n grid; tests whose window holds fewer than two grid points
    are skipped.
    """
    sc = baseline.scenario
    if n_lo is None:
        n_lo = max(TRAPEZOID_RANGE[0], sc.n_grid[0])
    if n_hi is None:
        n_hi = min(TRAPEZOID_RANGE[1], sc.n_grid[-1])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "baseline",
                "test",
                "variant",
                "sigma2",
                "n_lo",
                "n_hi",
                "avg_diff",
                "reps",
                "seed",
            ]
        )
        for grid in grids:
            if grid.test_id == baseline.test_id:
                continue
            try:
                averages = averaged_differences(baseline, grid, n_lo, n_hi)
            except GridTooSparse:
                continue
            desc = parse_descriptor(grid.test_id)
            for sigma2 in sc.sigma2_grid:
                writer.writerow(
                    [
                        baseline.test_id,
                        grid.test_id,
                        desc.variant_label(),
                        f"{sigma2:g}",
                        n_lo,
                        n_hi,
                        f"{averages[sigma2]:.6f}",
                        sc.reps,
                        sc.seed,
                    ]
                )
