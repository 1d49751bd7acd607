"""Classical two-sample baselines: pooled t-test and Welch's test.

Both need the Student-t distribution function, which is computed here from
scratch through the regularized incomplete beta function so the package has
no runtime dependency beyond numpy. The continued-fraction evaluation
follows the standard even/odd scheme with modified Lentz iteration and the
tail-symmetry switch into the fast-converging region.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SamplePair
from .errors import DegenerateData

_CF_MAX_ITER = 3000
_CF_EPS = 3e-15
_CF_TINY = 1e-300


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta; fast for x < (a+1)/(a+b+2)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        coef = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coef * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + coef / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coef * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + coef / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        a * math.log(x)
        + b * math.log1p(-x)
        + math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def student_t_cdf(x: float, df: float) -> float:
    """P(T <= x) for T Student-t with df degrees of freedom.

    Exactly symmetric by construction: cdf(-x) = 1 - cdf(x).
    """
    if not df > 0 or math.isinf(df):
        raise ValueError("df must be positive and finite")
    if math.isnan(x):
        raise ValueError("x must be a number")
    if x == 0.0:
        return 0.5
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    # Pick the orientation whose beta argument stays away from 1, where
    # rounding in df/(df + x*x) or its complement would swallow the result.
    if x * x > df:
        tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + x * x))
        return 1.0 - tail if x > 0 else tail
    half = 0.5 * regularized_incomplete_beta(0.5, 0.5 * df, x * x / (df + x * x))
    return 0.5 + half if x > 0 else 0.5 - half


class ClassicalTest(enum.Enum):
    STUDENT_T = "t"
    WELCH_T = "welch"


@dataclass(frozen=True)
class ClassicalResult:
    """Outcome of a classical two-sample test at a fixed level."""

    statistic: float
    df: float
    p_value: float
    test: ClassicalTest
    alpha: float
    reject: bool

    def __post_init__(self):
        if not self.df > 0:
            raise ValueError("df must be positive")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError("p_value must lie in [0, 1]")


def _two_sided_p(statistic: float, df: float) -> float:
    return 2.0 * student_t_cdf(-abs(statistic), df)


def _group_moments(pair: SamplePair):
    n1, n2 = pair.n1, pair.n2
    m1 = float(np.mean(pair.y1))
    m2 = float(np.mean(pair.y2))
    v1 = float(np.var(pair.y1, ddof=1))
    v2 = float(np.var(pair.y2, ddof=1))
    return n1, n2, m1, m2, v1, v2


def t_test(pair: SamplePair, alpha: float = 0.05) -> ClassicalResult:
    """Two-sided pooled-variance two-sample t-test."""
    n1, n2, m1, m2, v1, v2 = _group_moments(pair)
    df = n1 + n2 - 2
    pooled_var = ((n1 - 1) * v1 + (n2 - 1) * v2) / df
    if pooled_var <= 0.0:
        raise DegenerateData("pooled variance is zero")
    statistic = (m1 - m2) / math.sqrt(pooled_var * (1.0 / n1 + 1.0 / n2))
    p = _two_sided_p(statistic, df)
    return ClassicalResult(
        statistic=statistic,
        df=float(df),
        p_value=p,
        test=ClassicalTest.STUDENT_T,
        alpha=alpha,
        reject=p < alpha,
    )


def welch_test(pair: SamplePair, alpha: float = 0.05) -> ClassicalResult:
    """Two-sided Welch test with the Welch-Satterthwaite degrees of freedom."""
    n1, n2, m1, m2, v1, v2 = _group_moments(pair)
    if v1 <= 0.0 or v2 <= 0.0:
        raise DegenerateData("a group has zero variance")
    a1 = v1 / n1
    a2 = v2 / n2
    statistic = (m1 - m2) / math.sqrt(a1 + a2)
    df = (a1 + a2) ** 2 / (a1**2 / (n1 - 1) + a2**2 / (n2 - 1))
    p = _two_sided_p(statistic, df)
    return ClassicalResult(
        statistic=statistic,
        df=df,
        p_value=p,
        test=ClassicalTest.WELCH_T,
        alpha=alpha,
        reject=p < alpha,
    )
