"""Student-t distribution function and the classical two-sample baselines."""
import math

import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from mtest.core import SamplePair
from mtest.errors import DegenerateData
from mtest.reference import (
    ClassicalTest,
    regularized_incomplete_beta,
    student_t_cdf,
    t_test,
    welch_test,
)
from oracles import t_cdf_quad

finite_x = st.floats(-30, 30, allow_nan=False)
any_df = st.floats(0.5, 1e4, allow_nan=False)


class TestIncompleteBeta:
    def test_closed_forms(self):
        assert regularized_incomplete_beta(1.0, 1.0, 0.3) == pytest.approx(0.3)
        assert regularized_incomplete_beta(2.0, 1.0, 0.7) == pytest.approx(0.49)
        assert regularized_incomplete_beta(1.0, 2.0, 0.2) == pytest.approx(
            1.0 - 0.8**2
        )

    def test_endpoints(self):
        assert regularized_incomplete_beta(2.5, 1.5, 0.0) == 0.0
        assert regularized_incomplete_beta(2.5, 1.5, 1.0) == 1.0

    @given(
        a=st.floats(0.1, 50),
        b=st.floats(0.1, 50),
        x=st.floats(0.001, 0.999),
    )
    def test_tail_symmetry(self, a, b, x):
        left = regularized_incomplete_beta(a, b, x)
        right = regularized_incomplete_beta(b, a, 1.0 - x)
        assert left + right == pytest.approx(1.0, abs=1e-12)

    @given(
        a=st.floats(0.1, 50),
        b=st.floats(0.1, 50),
        x=st.floats(0.001, 0.999),
    )
    def test_matches_scipy(self, a, b, x):
        ours = regularized_incomplete_beta(a, b, x)
        assert ours == pytest.approx(scipy.special.betainc(a, b, x), abs=1e-12)


class TestStudentTCdf:
    def test_center_and_symmetry(self):
        assert student_t_cdf(0.0, 7.0) == 0.5
        for x in (0.3, 1.0, 4.5, 20.0):
            for df in (1.0, 2.0, 10.0, 100.0):
                assert student_t_cdf(x, df) + student_t_cdf(-x, df) == pytest.approx(
                    1.0, abs=1e-14
                )

    def test_cauchy_closed_form(self):
        for x in (-5.0, -0.7, 0.4, 3.0, 50.0):
            assert student_t_cdf(x, 1.0) == pytest.approx(
                0.5 + math.atan(x) / math.pi, abs=1e-14
            )

    def test_two_dof_closed_form(self):
        for x in (-4.0, -1.0, 0.5, 2.5):
            expected = 0.5 + x / (2.0 * math.sqrt(2.0 + x * x))
            assert student_t_cdf(x, 2.0) == pytest.approx(expected, abs=1e-14)

    def test_matches_quadrature_oracle(self):
        rng = np.random.default_rng(7)
        cases = [(x, df) for df in (1.0, 2.0, 10.0, 100.0)
                 for x in (-8.0, -1.0, -0.01, 0.9, 6.0)]
        cases += list(zip(rng.uniform(-10, 10, 10), rng.uniform(0.5, 500, 10)))
        for x, df in cases:
            assert student_t_cdf(x, df) == pytest.approx(
                t_cdf_quad(x, df), abs=1e-8
            )

    @given(
        st.floats(-4, 4, allow_nan=False),
        st.floats(-4, 4, allow_nan=False),
        st.floats(0.5, 1000, allow_nan=False),
    )
    def test_strictly_increasing(self, x1, x2, df):
        # body of the distribution, where doubles can resolve the increments
        lo, hi = sorted((x1, x2))
        if hi - lo < 1e-6:
            return
        assert student_t_cdf(lo, df) < student_t_cdf(hi, df)

    @given(finite_x, finite_x, any_df)
    def test_monotone_everywhere(self, x1, x2, df):
        lo, hi = sorted((x1, x2))
        assert student_t_cdf(lo, df) <= student_t_cdf(hi, df)

    def test_normal_limit_at_huge_df(self):
        for x in (-3.0, -1.0, 0.5, 2.0):
            normal = 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))
            assert student_t_cdf(x, 1e6) == pytest.approx(normal, abs=1e-6)

    def test_rejects_bad_df(self):
        with pytest.raises(ValueError):
            student_t_cdf(1.0, 0.0)
        with pytest.raises(ValueError):
            student_t_cdf(1.0, -2.0)


def example_pair():
    return SamplePair(
        np.array([1.0, 2.0, 3.0, 4.0, 5.0]), np.array([3.0, 4.0, 5.0, 6.0, 7.0])
    )


def random_pairs(min_size=2, max_size=12):
    value = st.floats(-100, 100, allow_nan=False)
    return (
        st.tuples(
            st.lists(value, min_size=min_size, max_size=max_size),
            st.lists(value, min_size=min_size, max_size=max_size),
        )
        .map(lambda t: SamplePair(np.array(t[0]), np.array(t[1])))
        .filter(lambda p: np.std(p.y1) > 1e-6 and np.std(p.y2) > 1e-6)
    )


class TestClassicalTests:
    def test_hand_example(self):
        res = t_test(example_pair())
        assert res.statistic == pytest.approx(-2.0)
        assert res.df == 8
        assert res.p_value == pytest.approx(2.0 * student_t_cdf(-2.0, 8.0))
        assert res.test is ClassicalTest.STUDENT_T
        assert not res.reject  # p ~ 0.0805 > 0.05

    def test_welch_equals_t_for_equal_spreads_and_sizes(self):
        t_res = t_test(example_pair())
        w_res = welch_test(example_pair())
        assert w_res.statistic == pytest.approx(t_res.statistic)
        assert w_res.df == pytest.approx(8.0)
        assert w_res.test is ClassicalTest.WELCH_T

    @given(random_pairs())
    def test_matches_scipy_pooled(self, pair):
        res = t_test(pair)
        ref = scipy.stats.ttest_ind(pair.y1, pair.y2, equal_var=True)
        assert res.statistic == pytest.approx(ref.statistic, abs=1e-10)
        assert res.p_value == pytest.approx(ref.pvalue, abs=1e-10)

    @given(random_pairs())
    def test_matches_scipy_welch(self, pair):
        res = welch_test(pair)
        ref = scipy.stats.ttest_ind(pair.y1, pair.y2, equal_var=False)
        assert res.statistic == pytest.approx(ref.statistic, abs=1e-10)
        assert res.p_value == pytest.approx(ref.pvalue, abs=1e-10)

    @given(
        random_pairs(),
        st.floats(0.1, 50),
        st.floats(-50, 50),
    )
    def test_affine_invariance(self, pair, a, b):
        moved = SamplePair(a * pair.y1 + b, a * pair.y2 + b)
        for run in (t_test, welch_test):
            base = run(pair)
            shifted = run(moved)
            assert shifted.p_value == pytest.approx(base.p_value, abs=1e-12)

    def test_welch_df_never_exceeds_pooled_df(self):
        # equal group sizes: Welch is the conservative baseline by design
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            pair = SamplePair(
                rng.standard_normal(n), 2.0 * rng.standard_normal(n) + 1.0
            )
            assert welch_test(pair).df <= t_test(pair).df + 1e-12

    def test_alpha_controls_reject_flag(self):
        res = t_test(example_pair(), alpha=0.10)
        assert res.reject  # p ~ 0.0805 < 0.10

    def test_degenerate_data_is_reported(self):
        flat = SamplePair(np.array([1.0, 1.0, 1.0]), np.array([1.0, 1.0, 1.0]))
        with pytest.raises(DegenerateData):
            t_test(flat)
        with pytest.raises(DegenerateData):
            welch_test(flat)

    def test_one_constant_group(self):
        # pooled variance stays positive so the t-test still runs;
        # Welch needs both group variances and refuses
        pair = SamplePair(np.array([2.0, 2.0, 2.0]), np.array([1.0, 3.0, 5.0]))
        assert math.isfinite(t_test(pair).p_value)
        with pytest.raises(DegenerateData):
            welch_test(pair)

    def test_welch_df_bounds_for_unequal_spreads(self):
        rng = np.random.default_rng(11)
        y1 = rng.standard_normal(10)
        y2 = 2.0 * rng.standard_normal(10)
        df = welch_test(SamplePair(y1, y2)).df
        assert 9.0 < df < 18.0
