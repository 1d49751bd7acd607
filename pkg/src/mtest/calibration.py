"""Empirical null distributions of the m statistic.

A calibration table records the m values observed on many datasets simulated
under the null (a single normal population split into two groups). The
significance threshold at level alpha is an order statistic of that empirical
distribution, so the rejection rule ``m > threshold`` has Type I error alpha
by construction, up to Monte Carlo noise.

Tables are keyed by everything that changes the null distribution of m:
group sizes, prior variant, the set of alternative hypotheses, and the
number of Monte Carlo samples used by the estimator. They are persisted as
versioned JSON documents and looked up through a directory-backed store.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import SamplePair
from .errors import (
    CorruptTable,
    FormatVersionMismatch,
    InvalidAlpha,
    MissingCalibration,
)
from .estimator import BOTH_ALTERNATIVES, EstimatorSettings, m_statistic
from .models import HypothesisId, PriorVariant
from .seeding import DATA_STREAM, ESTIMATOR_STREAM, derive_seed, substream

FORMAT_VERSION = 1
JEFFREYS_CUTOFFS = (3, 10, 30)

# stable small integers identifying a variant inside derived seeds
_VARIANT_SEED_TAG = {
    PriorVariant.MAIN: 0,
    PriorVariant.INFORMATIVE: 1,
    PriorVariant.NONINFORMATIVE: 2,
}


def _alternatives_mask(alternatives: frozenset) -> int:
    mask = 0
    if HypothesisId.H1 in alternatives:
        mask |= 1
    if HypothesisId.H2 in alternatives:
        mask |= 2
    return mask


@dataclass(frozen=True)
class CalibrationKey:
    """Identifies one null distribution of m.

    Two tables with equal keys estimate the same distribution; they differ
    only in Monte Carlo noise (runs and generator seed).
    """

    n1: int
    n2: int
    variant: PriorVariant = PriorVariant.MAIN
    alternatives: frozenset = BOTH_ALTERNATIVES
    n_mc_samples: int = 1500

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise ValueError("group sizes must be at least 2")
        alts = frozenset(self.alternatives)
        if not alts or not alts <= BOTH_ALTERNATIVES:
            raise ValueError("alternatives must be a nonempty subset of {H1, H2}")
        object.__setattr__(self, "alternatives", alts)
        if self.n_mc_samples < 100:
            raise ValueError("n_mc_samples must be at least 100")

    @property
    def alternatives_label(self) -> str:
        return "+".join(
            h.name.lower() for h in sorted(self.alternatives, key=lambda h: h.value)
        )

    def __str__(self) -> str:
        return (
            f"(n1={self.n1}, n2={self.n2}, variant={self.variant.value}, "
            f"alternatives={self.alternatives_label}, "
            f"n_mc_samples={self.n_mc_samples})"
        )

    def file_name(self) -> str:
        return (
            f"{self.variant.value}-n{self.n1}x{self.n2}"
            f"-{self.alternatives_label}-s{self.n_mc_samples}.json"
        )

    def seed_tag(self) -> tuple:
        """Integer tuple mixed into derived seeds for auto-built tables."""
        return (
            self.n1,
            self.n2,
            _VARIANT_SEED_TAG[self.variant],
            _alternatives_mask(self.alternatives),
            self.n_mc_samples,
        )


@dataclass(frozen=True)
class CalibrationTable:
    """Sorted null sample of m plus the key and seed that produced it."""

    key: CalibrationKey
    runs: int
    sorted_m: np.ndarray
    generator_seed: int
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        arr = np.asarray(self.sorted_m, dtype=float)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "sorted_m", arr)
        if arr.ndim != 1 or arr.size != self.runs or self.runs < 1:
            raise CorruptTable("table length does not match its declared runs")
        if np.any(np.diff(arr) < 0):
            raise CorruptTable("table entries are not sorted")
        if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
            raise CorruptTable("table entries must be positive and finite")


def _simulate_m(key: CalibrationKey, generator_seed: int, run: int) -> float:
    """m on one null dataset; depends only on (key, generator_seed, run)."""
    rng = substream(generator_seed, run, DATA_STREAM)
    pooled = rng.standard_normal(key.n1 + key.n2)
    pair = SamplePair(y1=pooled[: key.n1], y2=pooled[key.n1 :])
    settings = EstimatorSettings(
        n_samples=key.n_mc_samples,
        seed=derive_seed(generator_seed, run, ESTIMATOR_STREAM),
    )
    return m_statistic(pair, key.variant, settings, alternatives=key.alternatives).m


def _simulate_chunk(key: CalibrationKey, generator_seed: int, start: int, stop: int):
    return [_simulate_m(key, generator_seed, run) for run in range(start, stop)]


def build_table(
    key: CalibrationKey,
    runs: int,
    seed: int,
    workers: int = 1,
) -> CalibrationTable:
    """Simulate ``runs`` null datasets and collect their sorted m values.

    Every run's data and estimator seeds derive from (seed, run index), so
    the resulting table is identical for any worker count.
    """
    if runs < 1000:
        raise ValueError("calibration needs at least 1000 runs")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if workers == 1:
        values = _simulate_chunk(key, seed, 0, runs)
    else:
        chunk = math.ceil(runs / (workers * 4))
        bounds = [(s, min(s + chunk, runs)) for s in range(0, runs, chunk)]
        values = np.empty(runs)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_simulate_chunk, key, seed, s, t): (s, t)
                for s, t in bounds
            }
            for future, (s, t) in futures.items():
                values[s:t] = future.result()
    sorted_m = np.sort(np.asarray(values, dtype=float))
    return CalibrationTable(key=key, runs=runs, sorted_m=sorted_m, generator_seed=seed)


def threshold(table: CalibrationTable, alpha: float) -> float:
    """Smallest table entry t such that P(m > t) <= alpha empirically.

    Returns the ceil((1-alpha)*runs)-th order statistic; the rejection rule
    downstream is strict: reject when m > threshold.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must be in (0, 1), got {alpha}")
    k = math.ceil((1.0 - alpha) * table.runs)
    return float(table.sorted_m[k - 1])


def p_value(table: CalibrationTable, m_obs: float) -> float:
    """Monte Carlo p-value of an observed m with the +1 correction."""
    above = table.runs - int(np.searchsorted(table.sorted_m, m_obs, side="left"))
    return (above + 1) / (table.runs + 1)


def jeffreys_type1(table: CalibrationTable) -> dict:
    """Type I error from rejecting at fixed Bayes-factor evidence cutoffs.

    Fractions of null m values strictly above 3 (substantial), 10 (strong),
    and 30 (very strong), showing what those conventional evidence levels
    cost in false positives if used directly as rejection rules.
    """
    out = {}
    for cutoff in JEFFREYS_CUTOFFS:
        above = table.runs - int(np.searchsorted(table.sorted_m, cutoff, side="right"))
        out[cutoff] = above / table.runs
    return out


def save_table(table: CalibrationTable, path) -> None:
    """Write a table as a versioned JSON document (lossless round-trip)."""
    doc = {
        "format": "m-test calibration table",
        "format_version": table.format_version,
        "key": {
            "n1": table.key.n1,
            "n2": table.key.n2,
            "variant": table.key.variant.value,
            "alternatives": sorted(h.name for h in table.key.alternatives),
            "n_mc_samples": table.key.n_mc_samples,
        },
        "generator_seed": table.generator_seed,
        "runs": table.runs,
        "sorted_m": [float(v) for v in table.sorted_m],
    }
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=None, separators=(",", ":"))
        fh.write("\n")
    os.replace(tmp, path)


def load_table(path) -> CalibrationTable:
    """Read a table written by save_table, enforcing format and invariants."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CorruptTable(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptTable(f"{path}: missing format_version")
    version = doc["format_version"]
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"{path}: format_version {version} (this build reads {FORMAT_VERSION})"
        )
    try:
        raw_key = doc["key"]
        key = CalibrationKey(
            n1=int(raw_key["n1"]),
            n2=int(raw_key["n2"]),
            variant=PriorVariant(raw_key["variant"]),
            alternatives=frozenset(
                HypothesisId[name] for name in raw_key["alternatives"]
            ),
            n_mc_samples=int(raw_key["n_mc_samples"]),
        )
        table = CalibrationTable(
            key=key,
            runs=int(doc["runs"]),
            sorted_m=np.asarray(doc["sorted_m"], dtype=float),
            generator_seed=int(doc["generator_seed"]),
            format_version=int(version),
        )
    except CorruptTable:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptTable(f"{path}: {exc}") from exc
    return table


class TableStore:
    """Directory of calibration tables addressed by CalibrationKey.

    Lookups load from disk (with an in-memory cache). When auto_build is
    enabled a missing table is simulated with build_runs runs and saved;
    its seed derives from (build_seed, key) so the store's contents do not
    depend on lookup order.
    """

    def __init__(
        self,
        directory,
        auto_build: bool = False,
        build_runs: int = 20_000,
        build_seed: int = 0,
        workers: int = 1,
    ):
        self.directory = Path(directory)
        self.auto_build = auto_build
        self.build_runs = build_runs
        self.build_seed = build_seed
        self.workers = workers
        self._cache: dict = {}

    def path_for(self, key: CalibrationKey) -> Path:
        return self.directory / key.file_name()

    def lookup(self, key: CalibrationKey) -> CalibrationTable:
        if key in self._cache:
            return self._cache[key]
        path = self.path_for(key)
        if path.exists():
            table = load_table(path)
            if table.key != key:
                raise CorruptTable(f"{path}: stored key does not match its file name")
        elif self.auto_build:
            table = self.build_and_save(key)
        else:
            raise MissingCalibration(
                f"no calibration table for {key} in {self.directory}"
            )
        self._cache[key] = table
        return table

    def build_and_save(self, key: CalibrationKey) -> CalibrationTable:
        seed = derive_seed(self.build_seed, *key.seed_tag())
        table = build_table(key, runs=self.build_runs, seed=seed, workers=self.workers)
        self.directory.mkdir(parents=True, exist_ok=True)
        save_table(table, self.path_for(key))
        self._cache[key] = table
        return table

    def list_tables(self):
        """All readable tables in the directory, sorted by file name."""
        tables = []
        if self.directory.is_dir():
            for path in sorted(self.directory.glob("*.json")):
                tables.append((path, load_table(path)))
        return tables
