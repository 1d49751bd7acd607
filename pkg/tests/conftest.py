"""Shared fixtures and the frozen cross-validation suite."""
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mtest.core import SamplePair
from mtest.models import HypothesisId, PriorVariant

# Monte Carlo tests are wall-clock heavy; per-example deadlines only add
# flakes. Fixtures used under @given here are frozen dataclasses, so not
# resetting them between examples is safe.
settings.register_profile(
    "mc",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("mc")

# Frozen estimator validation suite: every hypothesis and every prior variant
# appears at least once, on symmetric and on shifted two-point groups.
# (label, y1, y2, hypothesis, variant)
TOY_SUITE = (
    ("h0-noninf-sym", (-0.5, 0.5), (-0.5, 0.5),
     HypothesisId.H0, PriorVariant.NONINFORMATIVE),
    ("h1-noninf-sym", (-0.5, 0.5), (-0.5, 0.5),
     HypothesisId.H1, PriorVariant.NONINFORMATIVE),
    ("h2-noninf-sym", (-0.5, 0.5), (-0.5, 0.5),
     HypothesisId.H2, PriorVariant.NONINFORMATIVE),
    ("h0-main-shift", (0.0, 2.0), (4.0, 6.0),
     HypothesisId.H0, PriorVariant.MAIN),
    ("h2-info-shift", (0.0, 2.0), (4.0, 6.0),
     HypothesisId.H2, PriorVariant.INFORMATIVE),
)


def toy_cases():
    for label, y1, y2, h, v in TOY_SUITE:
        yield label, SamplePair(np.asarray(y1), np.asarray(y2)), h, v


@pytest.fixture
def shifted_pair() -> SamplePair:
    return SamplePair(np.array([0.0, 2.0]), np.array([4.0, 6.0]))
