"""Generative hypotheses, prior variants, samplers, and densities.

Three nested models for a two-sample problem on normalized data:

* H0: both groups share one normal distribution (mu0, sigma0).
* H1: distinct means mu1, mu2; shared standard deviation sigma12.
* H2: distinct means and distinct standard deviations per group.

Each hypothesis is bound to one of three prior families over its
parameters. Mean priors are normal, parameterized by (center, variance);
sigma priors are uniform on an open interval (epsilon, hi).
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import NormalizedSamplePair, sigma_3sem, summary
from .errors import InvalidPrior

EPSILON = 1e-3

_LOG_2PI = math.log(2.0 * math.pi)


class HypothesisId(enum.Enum):
    H0 = "H0"
    H1 = "H1"
    H2 = "H2"


class PriorVariant(enum.Enum):
    MAIN = "main"
    INFORMATIVE = "informative"
    NONINFORMATIVE = "noninformative"


@dataclass(frozen=True)
class NormalPrior:
    center: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise InvalidPrior("normal prior variance must be positive")


@dataclass(frozen=True)
class UniformPrior:
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo > 0 and self.hi > self.lo):
            raise InvalidPrior(
                f"uniform sigma prior needs 0 < lo < hi, got ({self.lo}, {self.hi})")


@dataclass(frozen=True)
class PriorSpec:
    """Per-parameter prior descriptors for one hypothesis.

    ``means`` and ``sigmas`` are ordered: H0 has one of each; H1 has two
    means and one sigma; H2 has two means and two sigmas (group order).
    """

    hypothesis: HypothesisId
    variant: PriorVariant
    means: tuple[NormalPrior, ...]
    sigmas: tuple[UniformPrior, ...]
    epsilon: float = EPSILON

    _ARITY = {
        HypothesisId.H0: (1, 1),
        HypothesisId.H1: (2, 1),
        HypothesisId.H2: (2, 2),
    }

    def __post_init__(self):
        expected = self._ARITY[self.hypothesis]
        if (len(self.means), len(self.sigmas)) != expected:
            raise InvalidPrior(
                f"{self.hypothesis.value} needs {expected[0]} mean prior(s) and "
                f"{expected[1]} sigma prior(s), got "
                f"({len(self.means)}, {len(self.sigmas)})")


@dataclass(frozen=True)
class ParamVector:
    """One concrete parameter draw; arity follows the hypothesis."""

    means: tuple[float, ...]
    sigmas: tuple[float, ...]

    def __post_init__(self):
        if any(not s > 0 for s in self.sigmas):
            raise ValueError("all sigmas must be positive")


def _sigma_prior(hi: float) -> UniformPrior:
    if hi <= EPSILON:
        raise InvalidPrior(
            f"sigma upper bound {hi!r} is not above epsilon {EPSILON!r}")
    return UniformPrior(EPSILON, hi)


def build_prior(h: HypothesisId, v: PriorVariant,
                data: NormalizedSamplePair) -> PriorSpec:
    """Construct the prior family for hypothesis ``h`` under variant ``v``.

    Main: mean ~ Normal(group mean, 1/group count), sigma ~ U(eps, 3) for
    the pooled model and U(eps, 1) per group. Informative: mean variance
    is the squared SEM and sigma bounds come from :func:`sigma_3sem`.
    Non-informative: unit-variance mean priors and sigma ~ U(eps, 3).
    """
    pooled = summary(data.pooled)
    g1 = summary(data.y1)
    g2 = summary(data.y2)

    if v is PriorVariant.MAIN:
        mean0 = NormalPrior(pooled.mean, 1.0 / pooled.n)
        mean1 = NormalPrior(g1.mean, 1.0 / g1.n)
        mean2 = NormalPrior(g2.mean, 1.0 / g2.n)
        sig0 = _sigma_prior(3.0)
        sig_grp = [_sigma_prior(1.0), _sigma_prior(1.0)]
        sig_shared = _sigma_prior(1.0)
    elif v is PriorVariant.INFORMATIVE:
        mean0 = NormalPrior(pooled.mean, pooled.sem ** 2)
        mean1 = NormalPrior(g1.mean, g1.sem ** 2)
        mean2 = NormalPrior(g2.mean, g2.sem ** 2)
        s3_1 = sigma_3sem(data.y1)
        s3_2 = sigma_3sem(data.y2)
        sig0 = _sigma_prior(sigma_3sem(data.pooled))
        sig_grp = [_sigma_prior(s3_1), _sigma_prior(s3_2)]
        sig_shared = _sigma_prior(max(s3_1, s3_2))
    elif v is PriorVariant.NONINFORMATIVE:
        mean0 = NormalPrior(pooled.mean, 1.0)
        mean1 = NormalPrior(g1.mean, 1.0)
        mean2 = NormalPrior(g2.mean, 1.0)
        sig0 = _sigma_prior(3.0)
        sig_grp = [_sigma_prior(3.0), _sigma_prior(3.0)]
        sig_shared = _sigma_prior(3.0)
    else:  # pragma: no cover - closed enumeration
        raise ValueError(f"unknown prior variant {v!r}")

    if h is HypothesisId.H0:
        return PriorSpec(h, v, (mean0,), (sig0,))
    if h is HypothesisId.H1:
        return PriorSpec(h, v, (mean1, mean2), (sig_shared,))
    if h is HypothesisId.H2:
        return PriorSpec(h, v, (mean1, mean2), tuple(sig_grp))
    raise ValueError(f"unknown hypothesis {h!r}")  # pragma: no cover


def _draw_open_uniform(rng: np.random.Generator, lo: float, hi: float,
                       size: int) -> np.ndarray:
    # Boundary hits have probability ~2^-53 but would carry zero prior
    # density, so they are redrawn.
    out = rng.uniform(lo, hi, size=size)
    bad = (out <= lo) | (out >= hi)
    while np.any(bad):
        out[bad] = rng.uniform(lo, hi, size=int(bad.sum()))
        bad = (out <= lo) | (out >= hi)
    return out


def sample_prior(spec: PriorSpec, rng: np.random.Generator) -> ParamVector:
    """Draw one independent parameter vector from the prior."""
    means, sigmas = sample_prior_batch(spec, rng, 1)
    return ParamVector(tuple(float(x) for x in means[0]),
                       tuple(float(x) for x in sigmas[0]))


def sample_prior_batch(spec: PriorSpec, rng: np.random.Generator,
                       size: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``size`` parameter vectors as (means, sigmas) arrays.

    Shapes are ``(size, len(spec.means))`` and ``(size, len(spec.sigmas))``.
    """
    means = np.empty((size, len(spec.means)))
    for j, mp in enumerate(spec.means):
        means[:, j] = mp.center + math.sqrt(mp.variance) * rng.standard_normal(size)
    sigmas = np.empty((size, len(spec.sigmas)))
    for j, sp in enumerate(spec.sigmas):
        sigmas[:, j] = _draw_open_uniform(rng, sp.lo, sp.hi, size)
    return means, sigmas


def _normal_logpdf(x: np.ndarray, mean: float, sd: float) -> np.ndarray:
    return -0.5 * _LOG_2PI - np.log(sd) - 0.5 * ((x - mean) / sd) ** 2


def log_likelihood(h: HypothesisId, params: ParamVector,
                   data: NormalizedSamplePair) -> float:
    """Exact log of the product of normal densities over all observations."""
    if h is HypothesisId.H0:
        (mu0,), (sig0,) = params.means, params.sigmas
        return float(np.sum(_normal_logpdf(data.pooled, mu0, sig0)))
    if h is HypothesisId.H1:
        (mu1, mu2), (sig,) = params.means, params.sigmas
        return float(np.sum(_normal_logpdf(data.y1, mu1, sig))
                     + np.sum(_normal_logpdf(data.y2, mu2, sig)))
    if h is HypothesisId.H2:
        (mu1, mu2), (sig1, sig2) = params.means, params.sigmas
        return float(np.sum(_normal_logpdf(data.y1, mu1, sig1))
                     + np.sum(_normal_logpdf(data.y2, mu2, sig2)))
    raise ValueError(f"unknown hypothesis {h!r}")  # pragma: no cover


def log_prior_density(spec: PriorSpec, params: ParamVector) -> float:
    """Joint prior log density; -inf when any sigma leaves its support."""
    total = 0.0
    for sp, s in zip(spec.sigmas, params.sigmas):
        if not (sp.lo < s < sp.hi):
            return -math.inf
        total -= math.log(sp.hi - sp.lo)
    for mp, mu in zip(spec.means, params.means):
        total += -0.5 * (_LOG_2PI + math.log(mp.variance)) \
            - (mu - mp.center) ** 2 / (2.0 * mp.variance)
    return total
