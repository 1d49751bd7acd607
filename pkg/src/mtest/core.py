"""Sample containers, summary statistics, and the normalization transform.

All downstream computations (priors, likelihoods, calibration) operate on
data that has been shifted and rescaled to pooled mean 0 and pooled
standard deviation 1. The pooled rescaling uses the population (N)
denominator; per-group summary statistics and the standard error of the
mean use the unbiased (N-1) denominator.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateData, TooFewSamples


def _as_sample(y, name: str) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector")
    if arr.size < 2:
        raise TooFewSamples(f"{name} needs at least 2 observations, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SamplePair:
    """Two independent samples of real observations in the same units."""

    y1: np.ndarray
    y2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "y1", _as_sample(self.y1, "y1"))
        object.__setattr__(self, "y2", _as_sample(self.y2, "y2"))

    @property
    def n1(self) -> int:
        return self.y1.size

    @property
    def n2(self) -> int:
        return self.y2.size

    @property
    def pooled(self) -> np.ndarray:
        return np.concatenate([self.y1, self.y2])


@dataclass(frozen=True, eq=False)
class NormalizedSamplePair(SamplePair):
    """A sample pair after the affine transform ``(y - shift) / scale``.

    The stored values have pooled mean 0 and pooled standard deviation 1
    (population denominator); ``shift`` and ``scale`` make the transform
    invertible.
    """

    shift: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def denormalize(self) -> SamplePair:
        """Invert the recorded transform, recovering the original data."""
        return SamplePair(self.y1 * self.scale + self.shift,
                          self.y2 * self.scale + self.shift)


@dataclass(frozen=True)
class SummaryStats:
    """Mean, standard deviation (N-1), and standard error of one sample."""

    mean: float
    sd: float
    sem: float
    n: int


def summary(y) -> SummaryStats:
    """Summary statistics of a single sample vector (length >= 2)."""
    arr = _as_sample(y, "y")
    n = arr.size
    mean = float(np.mean(arr))
    sd = float(np.std(arr, ddof=1))
    return SummaryStats(mean=mean, sd=sd, sem=sd / np.sqrt(n), n=n)


def sigma_3sem(y) -> float:
    """Spread of ``y`` around a mean displaced by three standard errors.

    Returns sqrt( (1/(N-1)) * sum_i (y_i - (mean + 3*sem))^2 ), the
    standard deviation the sample would have if its true mean sat three
    SEMs above the empirical one.
    """
    arr = _as_sample(y, "y")
    stats = summary(arr)
    target = stats.mean + 3.0 * stats.sem
    return float(np.sqrt(np.sum((arr - target) ** 2) / (arr.size - 1)))


def normalize(pair: SamplePair) -> NormalizedSamplePair:
    """Shift and rescale both groups to pooled mean 0 and pooled sd 1.

    Raises DegenerateData when all pooled values are equal, since no
    scale can be estimated there.
    """
    pooled = pair.pooled
    shift = float(np.mean(pooled))
    scale = float(np.std(pooled))
    if scale <= 0.0:
        raise DegenerateData("all pooled values are equal; cannot rescale")
    base_shift = getattr(pair, "shift", 0.0)
    base_scale = getattr(pair, "scale", 1.0)
    return NormalizedSamplePair(
        y1=(pair.y1 - shift) / scale,
        y2=(pair.y2 - shift) / scale,
        shift=base_shift + shift * base_scale,
        scale=base_scale * scale,
    )
