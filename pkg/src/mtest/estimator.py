"""Marginal-likelihood estimation and the m statistic.

The statistic is the largest Bayes factor of the alternative hypotheses
against the null, m = max_i P(y|Hi) / P(y|H0), with each marginal
likelihood estimated by Monte Carlo. The default estimator averages the
likelihood over draws from the prior; a posterior harmonic-mean estimator
is provided for cross-validation but is substantially slower.

All marginals are computed and stored in log space; Bayes factors only
exponentiate at the boundary. Normal likelihoods are evaluated through
per-group sufficient statistics (n, mean, centered sum of squares), so one
evaluation costs the same regardless of sample size:

    sum_i (y_i - mu)^2 = SS + n * (ybar - mu)^2
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import NormalizedSamplePair, SamplePair, normalize
from .errors import ChainDegenerate, NumericalUnderflow
from .models import (
    HypothesisId,
    ParamVector,
    PriorSpec,
    PriorVariant,
    build_prior,
    log_prior_density,
    sample_prior_batch,
)
from .seeding import substream

_LOG_2PI = math.log(2.0 * math.pi)

# Fixed per-hypothesis substream tags: the stream a hypothesis sees depends
# only on (seed, hypothesis), never on which alternatives were requested.
_HYP_STREAM = {HypothesisId.H0: 0, HypothesisId.H1: 1, HypothesisId.H2: 2}

BOTH_ALTERNATIVES = frozenset({HypothesisId.H1, HypothesisId.H2})


class EstimatorMethod(enum.Enum):
    PRIOR_MC = "prior_mc"
    POSTERIOR_HARMONIC_MEAN = "posterior_harmonic_mean"


@dataclass(frozen=True)
class EstimatorSettings:
    """Knobs for the marginal-likelihood estimators.

    ``burn_in``, ``thinning`` and ``proposal_scale`` only apply to the
    posterior harmonic-mean method.
    """

    method: EstimatorMethod = EstimatorMethod.PRIOR_MC
    n_samples: int = 1500
    burn_in: int = 500
    thinning: int = 5
    proposal_scale: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 100:
            raise ValueError("n_samples must be at least 100")
        if self.burn_in < 0 or self.thinning < 1 or not self.proposal_scale > 0:
            raise ValueError("invalid chain settings")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class MTestResult:
    """Marginals, Bayes factors, and the test statistic for one dataset."""

    log_marginals: dict[HypothesisId, float]
    bayes_factors: dict[HypothesisId, float]
    m: float
    prior_variant: PriorVariant
    settings: EstimatorSettings

    @property
    def log_m(self) -> float:
        """log of the statistic; immune to exp overflow for huge factors."""
        lm0 = self.log_marginals[HypothesisId.H0]
        return max(self.log_marginals[h] - lm0 for h in self.bayes_factors)


class _GroupStats:
    """Sufficient statistics (n, mean, centered SS) of one sample vector."""

    __slots__ = ("n", "mean", "ss")

    def __init__(self, y: np.ndarray):
        self.n = y.size
        self.mean = float(np.mean(y))
        self.ss = float(np.sum((y - self.mean) ** 2))


def _data_stats(data: NormalizedSamplePair):
    return _GroupStats(data.pooled), _GroupStats(data.y1), _GroupStats(data.y2)


def _group_loglik(stats: _GroupStats, mu, log_sigma, inv_two_var):
    quad = stats.ss + stats.n * (stats.mean - mu) ** 2
    return -0.5 * stats.n * _LOG_2PI - stats.n * log_sigma - quad * inv_two_var


def _batch_loglik(h: HypothesisId, means: np.ndarray, sigmas: np.ndarray,
                  pooled: _GroupStats, g1: _GroupStats, g2: _GroupStats) -> np.ndarray:
    """Log likelihood of the data at each row of (means, sigmas)."""
    if h is HypothesisId.H0:
        s = sigmas[:, 0]
        return _group_loglik(pooled, means[:, 0], np.log(s), 0.5 / (s * s))
    if h is HypothesisId.H1:
        s = sigmas[:, 0]
        log_s, itv = np.log(s), 0.5 / (s * s)
        return (_group_loglik(g1, means[:, 0], log_s, itv)
                + _group_loglik(g2, means[:, 1], log_s, itv))
    if h is HypothesisId.H2:
        s1, s2 = sigmas[:, 0], sigmas[:, 1]
        return (_group_loglik(g1, means[:, 0], np.log(s1), 0.5 / (s1 * s1))
                + _group_loglik(g2, means[:, 1], np.log(s2), 0.5 / (s2 * s2)))
    raise ValueError(f"unknown hypothesis {h!r}")  # pragma: no cover


def _log_mean_exp(values: np.ndarray) -> float:
    """log(mean(exp(values))) shifted by the max for numerical stability."""
    top = float(np.max(values))
    if not math.isfinite(top):
        raise NumericalUnderflow("every sampled likelihood underflowed")
    return top + math.log(float(np.mean(np.exp(values - top))))


def log_marginal(h: HypothesisId, spec: PriorSpec, data: NormalizedSamplePair,
                 settings: EstimatorSettings) -> float:
    """Prior-sampling Monte Carlo estimate of log P(y | h).

    Averages the likelihood over ``settings.n_samples`` independent prior
    draws, stabilized through log-sum-exp. Deterministic given the seed.
    """
    if spec.hypothesis is not h:
        raise ValueError("spec does not match hypothesis")
    rng = substream(settings.seed, _HYP_STREAM[h])
    means, sigmas = sample_prior_batch(spec, rng, settings.n_samples)
    loglik = _batch_loglik(h, means, sigmas, *_data_stats(data))
    return _log_mean_exp(loglik)


def _chain_start(spec: PriorSpec, data: NormalizedSamplePair) -> np.ndarray:
    """Deterministic, in-support starting state near the data."""
    groups = [data.pooled] if spec.hypothesis is HypothesisId.H0 else [data.y1, data.y2]
    means = [float(np.mean(g)) for g in groups]
    sds = [float(np.std(g, ddof=1)) for g in groups]
    if spec.hypothesis is HypothesisId.H1:
        sds = [max(sds)]
    sigmas = [min(max(sd, sp.lo * 1.01), sp.hi * 0.99)
              for sd, sp in zip(sds, spec.sigmas)]
    return np.array(means + sigmas)


def _harmonic_chain(spec: PriorSpec, data: NormalizedSamplePair,
                    settings: EstimatorSettings):
    """Random-walk Metropolis chain targeting the posterior.

    Returns (retained states, retained log likelihoods, acceptance rate).
    The chain state is the concatenation (means..., sigmas...); proposals
    are isotropic Gaussian steps; a proposal whose prior density is -inf
    (sigma out of support) is rejected outright.
    """
    h = spec.hypothesis
    stats = _data_stats(data)
    n_mean = len(spec.means)
    dim = n_mean + len(spec.sigmas)
    total = settings.burn_in + settings.n_samples * settings.thinning

    rng = substream(settings.seed, _HYP_STREAM[h])
    steps = rng.standard_normal((total, dim)) * settings.proposal_scale
    log_u = np.log(rng.random(total))

    state = _chain_start(spec, data)
    cur_ll = float(_batch_loglik(h, state[None, :n_mean], state[None, n_mean:], *stats)[0])
    cur_lp = log_prior_density(spec, ParamVector(tuple(state[:n_mean]),
                                                 tuple(state[n_mean:])))

    kept_states = np.empty((settings.n_samples, dim))
    kept_ll = np.empty(settings.n_samples)
    accepted = 0
    kept = 0
    for t in range(total):
        cand = state + steps[t]
        sig = cand[n_mean:]
        if np.all(sig > 0):
            cand_lp = log_prior_density(
                spec, ParamVector(tuple(cand[:n_mean]), tuple(sig)))
        else:
            cand_lp = -math.inf
        if cand_lp > -math.inf:
            cand_ll = float(_batch_loglik(h, cand[None, :n_mean],
                                          cand[None, n_mean:], *stats)[0])
            if log_u[t] < (cand_ll + cand_lp) - (cur_ll + cur_lp):
                state, cur_ll, cur_lp = cand, cand_ll, cand_lp
                accepted += 1
        if t >= settings.burn_in and (t - settings.burn_in) % settings.thinning \
                == settings.thinning - 1:
            kept_states[kept] = state
            kept_ll[kept] = cur_ll
            kept += 1
    return kept_states[:kept], kept_ll[:kept], accepted / total


def log_marginal_harmonic(h: HypothesisId, spec: PriorSpec,
                          data: NormalizedSamplePair,
                          settings: EstimatorSettings) -> float:
    """Posterior harmonic-mean estimate of log P(y | h).

    Runs a Metropolis chain on the posterior and averages reciprocal
    likelihoods over the retained samples (log-sum-exp stabilized).
    Raises ChainDegenerate when the acceptance rate falls outside
    [1%, 99%], which signals a misconfigured proposal scale.
    """
    if spec.hypothesis is not h:
        raise ValueError("spec does not match hypothesis")
    _, kept_ll, rate = _harmonic_chain(spec, data, settings)
    if rate < 0.01 or rate > 0.99:
        raise ChainDegenerate(
            f"acceptance rate {rate:.3f} outside [0.01, 0.99]; "
            "adjust proposal_scale")
    return -_log_mean_exp(-kept_ll)


def m_statistic(data: SamplePair, variant: PriorVariant,
                settings: EstimatorSettings,
                alternatives: frozenset = BOTH_ALTERNATIVES) -> MTestResult:
    """Normalize the data and compute the maximum Bayes factor statistic.

    Each hypothesis is estimated on its own substream derived from
    ``settings.seed``, so a run with both alternatives decomposes exactly
    into the two single-alternative runs.
    """
    alts = frozenset(alternatives)
    if not alts:
        raise ValueError("alternatives must be non-empty")
    if not alts <= BOTH_ALTERNATIVES:
        raise ValueError("alternatives may only contain H1 and H2")

    norm = data if isinstance(data, NormalizedSamplePair) else normalize(data)
    estimate = (log_marginal if settings.method is EstimatorMethod.PRIOR_MC
                else log_marginal_harmonic)

    log_marginals = {}
    for h in [HypothesisId.H0] + sorted(alts, key=lambda h: h.value):
        spec = build_prior(h, variant, norm)
        log_marginals[h] = estimate(h, spec, norm, settings)

    lm0 = log_marginals[HypothesisId.H0]
    bayes_factors = {h: math.exp(log_marginals[h] - lm0) for h in sorted(
        alts, key=lambda h: h.value)}
    return MTestResult(
        log_marginals=log_marginals,
        bayes_factors=bayes_factors,
        m=max(bayes_factors.values()),
        prior_variant=variant,
        settings=settings,
    )
