"""Grubbs, Cochran and dispersion-analysis behavior."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edmlab.distributions import f_cdf
from edmlab.errors import InsufficientDataError, UnsupportedDesignError, ValidationError
from edmlab.stats import (
    KEEP,
    SUGGEST_ELIMINATE,
    anova_one_way,
    anova_two_way,
    grubbs_scan,
    homogeneity_check,
)

# frozen from the quadrature oracle (see tests/oracles.py)
GRUBBS_CRIT_N5_A05 = 1.7150373123424494
GRUBBS_CRIT_N3_A05 = 1.1543048513440395
COCHRAN_CRIT_K3_M2_A05 = 0.9988898140438527
COCHRAN_CRIT_K3_M3_A05 = 0.9673463787652649


class TestGrubbs:
    def test_zero_variance_keeps(self):
        s = grubbs_scan([5, 5, 5, 5])
        assert s.verdict == KEEP and s.statistic == 0.0

    def test_planted_outlier(self):
        s = grubbs_scan([10, 10, 10, 10, 50], alpha=0.05)
        assert s.statistic == pytest.approx(1.789, abs=0.01)
        assert s.statistic == pytest.approx(32 / math.sqrt(320), abs=1e-12)
        assert s.critical_value == pytest.approx(GRUBBS_CRIT_N5_A05, abs=1e-8)
        assert s.verdict == SUGGEST_ELIMINATE
        assert s.index == 4 and s.value == 50

    def test_small_sample_keeps(self):
        s = grubbs_scan([1, 2, 3], alpha=0.05)
        assert s.statistic == pytest.approx(1.0, abs=1e-12)
        assert s.critical_value == pytest.approx(GRUBBS_CRIT_N3_A05, abs=1e-8)
        assert s.verdict == KEEP

    def test_too_few_values(self):
        with pytest.raises(InsufficientDataError):
            grubbs_scan([1, 2])

    def test_ties_flag_smallest_index(self):
        s = grubbs_scan([0, 10, 0, 10, 5, 5])
        assert s.index in (0, 1)  # first maximizer of |x - mean|
        assert s.index == int(np.argmax(np.abs(np.array([0, 10, 0, 10, 5, 5]) - 5)))

    @given(st.lists(st.floats(-100, 100), min_size=4, max_size=12))
    @settings(max_examples=100, deadline=None)
    def test_flagged_removal_reduces_spread(self, xs):
        arr = np.asarray(xs, dtype=float)
        if arr.std(ddof=1) == 0:
            return
        s = grubbs_scan(xs)
        if s.verdict == SUGGEST_ELIMINATE:
            rest = np.delete(arr, s.index)
            assert rest.std(ddof=1) < arr.std(ddof=1)


class TestHomogeneity:
    def test_uniform_variances(self):
        rep = homogeneity_check([[1, 2, 3], [2, 3, 4], [3, 4, 5]], alpha=0.05)
        assert rep.cochran_c == pytest.approx(1 / 3, abs=1e-12)
        assert rep.per_group_variances == [1.0, 1.0, 1.0]
        assert rep.cochran_critical == pytest.approx(COCHRAN_CRIT_K3_M3_A05, abs=1e-8)
        assert rep.homogeneous

    def test_single_nonzero_variance(self):
        rep = homogeneity_check([[0, 0], [0, 0], [0, 100]], alpha=0.05)
        assert rep.cochran_c == 1.0
        assert rep.cochran_critical == pytest.approx(COCHRAN_CRIT_K3_M2_A05, abs=1e-8)
        assert rep.cochran_critical < 1.0
        assert not rep.homogeneous

    def test_all_constant_is_homogeneous_by_convention(self):
        rep = homogeneity_check([[7, 7], [7, 7], [7, 7]])
        assert rep.homogeneous and rep.cochran_c == pytest.approx(1 / 3)

    def test_all_constant_tolerates_unequal_sizes(self):
        rep = homogeneity_check([[7, 7, 7], [7, 7], [7, 7]])
        assert rep.homogeneous

    def test_unequal_sizes_rejected(self):
        with pytest.raises(UnsupportedDesignError):
            homogeneity_check([[1, 2, 3], [1, 2]])

    def test_needs_two_groups(self):
        with pytest.raises(ValidationError):
            homogeneity_check([[1, 2, 3]])

    @given(
        st.lists(
            st.lists(st.floats(-50, 50), min_size=3, max_size=3), min_size=2, max_size=6
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_c_range(self, groups):
        variances = [np.var(g, ddof=1) for g in groups]
        if all(v == 0 for v in variances):
            return
        rep = homogeneity_check(groups)
        k = len(groups)
        assert 1 / k - 1e-12 <= rep.cochran_c <= 1.0 + 1e-12


class TestAnovaOneWay:
    def test_identical_means(self):
        t = anova_one_way([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
        assert t.row("factor_A").sum_squares == pytest.approx(0.0, abs=1e-12)
        assert t.row("factor_A").f_statistic == 0.0

    def test_hand_example(self):
        t = anova_one_way([[1, 2, 3], [2, 3, 4], [3, 4, 5]])
        assert t.row("factor_A").sum_squares == pytest.approx(6.0, abs=1e-12)
        assert t.row("factor_A").df == 2
        assert t.row("error").sum_squares == pytest.approx(6.0, abs=1e-12)
        assert t.row("error").df == 6
        assert t.row("factor_A").f_statistic == pytest.approx(3.0, abs=1e-12)
        assert t.row("factor_A").p_value == pytest.approx(0.125, abs=1e-9)
        assert t.row("factor_A").p_value == pytest.approx(1 - f_cdf(3, 2, 6), abs=1e-12)
        assert not t.significant["factor_A"]

    def test_zero_within_variance(self):
        t = anova_one_way([[0, 0], [10, 10]])
        assert t.row("error").sum_squares == 0.0
        assert t.row("factor_A").sum_squares == pytest.approx(100.0)
        assert math.isinf(t.row("factor_A").f_statistic)
        assert t.row("factor_A").p_value == 0.0
        assert t.significant["factor_A"]

    def test_all_identical(self):
        t = anova_one_way([[4, 4], [4, 4]])
        assert t.row("factor_A").f_statistic == 0.0
        assert t.row("factor_A").p_value == 1.0

    def test_preconditions(self):
        with pytest.raises(ValidationError):
            anova_one_way([[1, 2, 3]])
        with pytest.raises(InsufficientDataError):
            anova_one_way([[1], [2]])


class TestAnovaTwoWay:
    def test_all_constant(self):
        cells = [[[3, 3], [3, 3]], [[3, 3], [3, 3]]]
        t = anova_two_way(cells)
        for src in ("factor_A", "factor_B", "interaction", "error"):
            assert t.row(src).sum_squares == pytest.approx(0.0, abs=1e-12)
        assert t.row("factor_A").f_statistic == 0.0

    def test_single_effect(self):
        cells = [[[0, 0], [0, 0]], [[10, 10], [10, 10]]]
        t = anova_two_way(cells)
        assert t.row("factor_B").sum_squares == pytest.approx(0.0, abs=1e-12)
        assert t.row("interaction").sum_squares == pytest.approx(0.0, abs=1e-12)
        assert math.isinf(t.row("factor_A").f_statistic)

    def test_planted_additive_effects(self):
        # cell mean(i, j) = a_i + b_j with a = (-1, +1), b = (-2, +2)
        cells = [
            [[-3, -3], [1, 1]],
            [[-1, -1], [3, 3]],
        ]
        t = anova_two_way(cells)
        assert t.row("factor_A").sum_squares == pytest.approx(8.0, abs=1e-12)
        assert t.row("factor_B").sum_squares == pytest.approx(32.0, abs=1e-12)
        assert t.row("interaction").sum_squares == pytest.approx(0.0, abs=1e-12)
        assert t.row("error").sum_squares == pytest.approx(0.0, abs=1e-12)

    def test_unbalanced_rejected(self):
        with pytest.raises(UnsupportedDesignError):
            anova_two_way([[[1, 2], [3, 4]], [[5, 6], [7]]])
        with pytest.raises(UnsupportedDesignError):
            anova_two_way([[[1, 2]], [[3, 4]]])


@st.composite
def _grouped_data(draw):
    k = draw(st.integers(2, 5))
    sizes = draw(st.lists(st.integers(2, 6), min_size=k, max_size=k))
    return [
        [draw(st.floats(-1e3, 1e3)) for _ in range(n)] for n in sizes
    ]


class TestPartitionProperties:
    @given(_grouped_data())
    @settings(max_examples=150, deadline=None)
    def test_one_way_partition(self, groups):
        t = anova_one_way(groups)
        total = t.row("total").sum_squares
        parts = t.row("factor_A").sum_squares + t.row("error").sum_squares
        assert parts == pytest.approx(total, rel=1e-9, abs=1e-9)
        assert t.row("total").df == t.row("factor_A").df + t.row("error").df

    @given(
        st.integers(2, 3),
        st.integers(2, 3),
        st.integers(2, 3),
        st.integers(0, 10_000),
    )
    @settings(max_examples=100, deadline=None)
    def test_two_way_partition(self, a, b, m, seed):
        rng = np.random.default_rng(seed)
        cells = (rng.normal(size=(a, b, m)) * 10).tolist()
        t = anova_two_way(cells)
        parts = sum(
            t.row(src).sum_squares for src in ("factor_A", "factor_B", "interaction", "error")
        )
        assert parts == pytest.approx(t.row("total").sum_squares, rel=1e-9, abs=1e-9)

    def test_shift_and_scale_equivariance(self):
        rng = np.random.default_rng(42)
        groups = [list(rng.normal(5, 2, size=4)) for _ in range(3)]
        base = anova_one_way(groups)
        shifted = anova_one_way([[x + 13.5 for x in g] for g in groups])
        scaled = anova_one_way([[x * 3.0 for x in g] for g in groups])
        for src in ("factor_A", "error", "total"):
            assert shifted.row(src).sum_squares == pytest.approx(
                base.row(src).sum_squares, rel=1e-9
            )
            assert scaled.row(src).sum_squares == pytest.approx(
                9.0 * base.row(src).sum_squares, rel=1e-9
            )
        assert scaled.row("factor_A").f_statistic == pytest.approx(
            base.row("factor_A").f_statistic, rel=1e-9
        )
        assert scaled.row("factor_A").p_value == pytest.approx(
            base.row("factor_A").p_value, rel=1e-9
        )
