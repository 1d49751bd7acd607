"""Hypothesis priors, likelihoods, and prior densities."""
import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from mtest.core import SamplePair, normalize
from mtest.errors import InvalidPrior
from mtest.models import (
    EPSILON,
    HypothesisId,
    NormalPrior,
    ParamVector,
    PriorSpec,
    PriorVariant,
    UniformPrior,
    build_prior,
    log_likelihood,
    log_prior_density,
    sample_prior,
    sample_prior_batch,
)

H0, H1, H2 = HypothesisId.H0, HypothesisId.H1, HypothesisId.H2

ALL_COMBOS = [(h, v) for h in HypothesisId for v in PriorVariant]


@pytest.fixture
def data(shifted_pair):
    # y1n = {-3, -1}/sqrt(5), y2n = {1, 3}/sqrt(5)
    return normalize(shifted_pair)


class TestBuildPrior:
    def test_main_variant_parameters(self, data):
        g1_mean = -2.0 / math.sqrt(5.0)

        spec = build_prior(H0, PriorVariant.MAIN, data)
        assert spec.means[0] == NormalPrior(pytest.approx(0.0, abs=1e-12), 0.25)
        assert spec.sigmas[0] == UniformPrior(EPSILON, 3.0)

        spec = build_prior(H1, PriorVariant.MAIN, data)
        assert spec.means[0].center == pytest.approx(g1_mean)
        assert spec.means[1].center == pytest.approx(-g1_mean)
        assert spec.means[0].variance == pytest.approx(0.5)
        assert spec.sigmas == (UniformPrior(EPSILON, 1.0),)

        spec = build_prior(H2, PriorVariant.MAIN, data)
        assert spec.sigmas == (UniformPrior(EPSILON, 1.0),) * 2

    def test_informative_variant_parameters(self, data):
        # normalized groups are two points 2/sqrt(5) apart: SS = 0.4,
        # sem^2 = 0.2, displaced-centre spread sqrt((0.4 + 2*1.8)/1) = 2
        spec = build_prior(H2, PriorVariant.INFORMATIVE, data)
        assert spec.means[0].variance == pytest.approx(0.2)
        assert spec.means[1].variance == pytest.approx(0.2)
        assert spec.sigmas[0].hi == pytest.approx(2.0)
        assert spec.sigmas[1].hi == pytest.approx(2.0)

        spec = build_prior(H1, PriorVariant.INFORMATIVE, data)
        assert spec.sigmas[0].hi == pytest.approx(2.0)  # max of the two groups

        spec = build_prior(H0, PriorVariant.INFORMATIVE, data)
        assert spec.means[0].variance == pytest.approx(1.0 / 3.0)
        assert spec.sigmas[0].hi == pytest.approx(math.sqrt(16.0 / 3.0))

    def test_noninformative_variant_parameters(self, data):
        for h in HypothesisId:
            spec = build_prior(h, PriorVariant.NONINFORMATIVE, data)
            assert all(mp.variance == 1.0 for mp in spec.means)
            assert all(sp == UniformPrior(EPSILON, 3.0) for sp in spec.sigmas)

    def test_arity_follows_hypothesis(self, data):
        for v in PriorVariant:
            assert len(build_prior(H0, v, data).means) == 1
            assert len(build_prior(H0, v, data).sigmas) == 1
            assert len(build_prior(H1, v, data).means) == 2
            assert len(build_prior(H1, v, data).sigmas) == 1
            assert len(build_prior(H2, v, data).means) == 2
            assert len(build_prior(H2, v, data).sigmas) == 2


class TestPriorValidation:
    def test_normal_prior_needs_positive_variance(self):
        with pytest.raises(InvalidPrior):
            NormalPrior(0.0, 0.0)

    def test_uniform_prior_needs_ordered_positive_bounds(self):
        with pytest.raises(InvalidPrior):
            UniformPrior(0.0, 1.0)
        with pytest.raises(InvalidPrior):
            UniformPrior(2.0, 1.0)

    def test_param_vector_rejects_nonpositive_sigma(self):
        with pytest.raises(ValueError):
            ParamVector((0.0,), (0.0,))


class TestSamplePrior:
    @pytest.mark.parametrize("h,v", ALL_COMBOS)
    def test_draws_stay_in_support(self, data, h, v):
        spec = build_prior(h, v, data)
        rng = np.random.default_rng(5)
        means, sigmas = sample_prior_batch(spec, rng, 2000)
        for j, sp in enumerate(spec.sigmas):
            assert np.all((sigmas[:, j] > sp.lo) & (sigmas[:, j] < sp.hi))
        for j, mp in enumerate(spec.means):
            z = (means[:, j] - mp.center) / math.sqrt(mp.variance)
            assert abs(z.mean()) < 0.1
            assert abs(z.std() - 1.0) < 0.1

    def test_single_draw_matches_batch_layout(self, data):
        spec = build_prior(H2, PriorVariant.MAIN, data)
        params = sample_prior(spec, np.random.default_rng(0))
        assert len(params.means) == 2
        assert len(params.sigmas) == 2


class TestLogLikelihood:
    def test_h0_matches_normal_logpdf(self, data):
        params = ParamVector((0.3,), (1.2,))
        expected = scipy.stats.norm.logpdf(data.pooled, 0.3, 1.2).sum()
        assert log_likelihood(H0, params, data) == pytest.approx(expected, rel=1e-12)

    def test_h1_shares_one_sigma_across_groups(self, data):
        params = ParamVector((-0.8, 0.9), (0.7,))
        expected = (
            scipy.stats.norm.logpdf(data.y1, -0.8, 0.7).sum()
            + scipy.stats.norm.logpdf(data.y2, 0.9, 0.7).sum()
        )
        assert log_likelihood(H1, params, data) == pytest.approx(expected, rel=1e-12)

    def test_h2_uses_per_group_sigmas(self, data):
        params = ParamVector((-0.8, 0.9), (0.7, 1.4))
        expected = (
            scipy.stats.norm.logpdf(data.y1, -0.8, 0.7).sum()
            + scipy.stats.norm.logpdf(data.y2, 0.9, 1.4).sum()
        )
        assert log_likelihood(H2, params, data) == pytest.approx(expected, rel=1e-12)

    @given(
        mu=st.floats(-3, 3),
        sigma=st.floats(0.05, 3),
    )
    def test_finite_for_valid_parameters(self, data, mu, sigma):
        value = log_likelihood(H0, ParamVector((mu,), (sigma,)), data)
        assert math.isfinite(value)


class TestLogPriorDensity:
    def test_factorizes_over_coordinates(self, data):
        spec = build_prior(H2, PriorVariant.MAIN, data)
        params = ParamVector((-0.5, 0.4), (0.3, 0.8))
        expected = sum(
            scipy.stats.norm.logpdf(m, mp.center, math.sqrt(mp.variance))
            for m, mp in zip(params.means, spec.means)
        ) + sum(
            -math.log(sp.hi - sp.lo) for sp in spec.sigmas
        )
        assert log_prior_density(spec, params) == pytest.approx(expected, rel=1e-12)

    def test_sigma_outside_support_has_no_mass(self, data):
        spec = build_prior(H0, PriorVariant.MAIN, data)
        assert log_prior_density(spec, ParamVector((0.0,), (3.5,))) == -math.inf
        assert log_prior_density(spec, ParamVector((0.0,), (EPSILON / 2,))) == -math.inf

    def test_support_boundary_is_open(self, data):
        spec = build_prior(H0, PriorVariant.MAIN, data)
        assert log_prior_density(spec, ParamVector((0.0,), (3.0,))) == -math.inf
        assert log_prior_density(spec, ParamVector((0.0,), (EPSILON,))) == -math.inf

    @pytest.mark.parametrize("h,v", ALL_COMBOS)
    def test_finite_on_sampled_draws(self, data, h, v):
        spec = build_prior(h, v, data)
        rng = np.random.default_rng(11)
        for _ in range(50):
            assert math.isfinite(log_prior_density(spec, sample_prior(spec, rng)))


class TestPriorSpecValidation:
    def test_arity_mismatch_is_rejected(self, data):
        good = build_prior(H2, PriorVariant.MAIN, data)
        with pytest.raises(InvalidPrior):
            PriorSpec(H2, PriorVariant.MAIN, good.means, good.sigmas[:1])
        with pytest.raises(InvalidPrior):
            PriorSpec(H0, PriorVariant.MAIN, good.means, good.sigmas)
