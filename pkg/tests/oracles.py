"""Independent numerical oracles for the Monte Carlo and special-function code.

Deliberately naive and slow implementations, written directly from the
mathematical definitions and depending only on scipy/numpy, never on the
package's own likelihood or distribution code. Written once and frozen
before the value tests that consume them.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy import stats
from scipy.special import logsumexp

from mtest.models import HypothesisId, PriorSpec

GRID_POINTS = 200


def _log_trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Log of trapezoid quadrature weights for an arbitrary ascending grid."""
    steps = np.diff(grid)
    weights = np.empty_like(grid)
    weights[0] = steps[0] / 2
    weights[-1] = steps[-1] / 2
    weights[1:-1] = (steps[:-1] + steps[1:]) / 2
    return np.log(weights)


def _mu_grid(prior, group_mean: float, points: int) -> np.ndarray:
    """Grid covering both the prior mass and the likelihood peak.

    The integrand in mu is a product of two normal factors, so it is never
    wider than the prior; it peaks between the prior center and the group
    mean.
    """
    sd = math.sqrt(prior.variance)
    lo = min(prior.center, group_mean) - 8.0 * sd
    hi = max(prior.center, group_mean) + 8.0 * sd
    return np.linspace(lo, hi, points)


def _sigma_grid(prior, points: int) -> np.ndarray:
    return np.linspace(prior.lo, prior.hi, points)


def _group_loglik_grid(y: np.ndarray, mus: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """Log likelihood of one group on a (mu, sigma) grid, summed over points."""
    y = np.asarray(y, float)[:, None, None]
    mu = mus[None, :, None]
    sigma = sigmas[None, None, :]
    return stats.norm.logpdf(y, mu, sigma).sum(axis=0)


def _marginal_2d(y, mean_prior, sigma_prior, points: int) -> float:
    """log of the double integral of likelihood x prior for one group."""
    mus = _mu_grid(mean_prior, float(np.mean(y)), points)
    sigmas = _sigma_grid(sigma_prior, points)
    log_f = _group_loglik_grid(y, mus, sigmas)
    log_f += stats.norm.logpdf(mus, mean_prior.center,
                               math.sqrt(mean_prior.variance))[:, None]
    log_f -= math.log(sigma_prior.hi - sigma_prior.lo)
    log_f += _log_trapezoid_weights(mus)[:, None]
    log_f += _log_trapezoid_weights(sigmas)[None, :]
    return float(logsumexp(log_f))


def grid_log_marginal(spec: PriorSpec, data, points: int = GRID_POINTS) -> float:
    """Tensor-grid trapezoid quadrature of log P(y | hypothesis).

    H0 and the per-group factors of H2 are plain 2-D integrals; H1 shares
    one sigma across groups, so for every sigma grid point the two mu
    integrals factor and the sigma integral is 1-D.
    """
    if spec.hypothesis is HypothesisId.H0:
        return _marginal_2d(data.pooled, spec.means[0], spec.sigmas[0], points)

    if spec.hypothesis is HypothesisId.H2:
        return (
            _marginal_2d(data.y1, spec.means[0], spec.sigmas[0], points)
            + _marginal_2d(data.y2, spec.means[1], spec.sigmas[1], points)
        )

    if spec.hypothesis is HypothesisId.H1:
        sigma_prior = spec.sigmas[0]
        sigmas = _sigma_grid(sigma_prior, points)
        log_inner = np.zeros(points)
        for y, mean_prior in zip((data.y1, data.y2), spec.means):
            mus = _mu_grid(mean_prior, float(np.mean(y)), points)
            log_f = _group_loglik_grid(y, mus, sigmas)
            log_f += stats.norm.logpdf(mus, mean_prior.center,
                                       math.sqrt(mean_prior.variance))[:, None]
            log_f += _log_trapezoid_weights(mus)[:, None]
            log_inner += logsumexp(log_f, axis=0)
        log_inner -= math.log(sigma_prior.hi - sigma_prior.lo)
        log_inner += _log_trapezoid_weights(sigmas)
        return float(logsumexp(log_inner))

    raise ValueError(f"unknown hypothesis {spec.hypothesis!r}")


def t_log_density(t: float, df: float) -> float:
    return (
        math.lgamma((df + 1.0) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * math.log(df * math.pi)
        - (df + 1.0) / 2.0 * math.log1p(t * t / df)
    )


def t_cdf_quad(x: float, df: float) -> float:
    """Student-t distribution function by adaptive quadrature of the density."""
    density = lambda t: math.exp(t_log_density(t, df))
    if abs(x) <= 30.0:
        body, _ = integrate.quad(density, 0.0, abs(x),
                                 epsabs=1e-13, epsrel=1e-13, limit=200)
        return 0.5 + body if x >= 0 else 0.5 - body
    tail, _ = integrate.quad(density, abs(x), np.inf,
                             epsabs=1e-13, epsrel=1e-13, limit=200)
    return 1.0 - tail if x > 0 else tail
