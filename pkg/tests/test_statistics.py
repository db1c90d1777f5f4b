# tests/test_statistics.py
import math

import numpy as np
import pytest
from scipy import stats

from error_handler import StatisticsError
from harness.statistics import (
    DIFFERENT, EQUIVALENT, PAIRED_T, WILCOXON, compare, geometric_mean, paired_t_test,
    relative_difference, shapiro_wilk, summarize, wilcoxon_signed_rank,
)


def normal_scores(n=20, loc=10.0, scale=1.0):
    """Expected normal order statistics: as normal-looking as a sample gets"""
    ranks = (np.arange(1, n + 1) - 0.375) / (n + 0.25)
    return loc + scale * stats.norm.ppf(ranks)


BIMODAL = [1.0] * 10 + [5.0] * 10


class TestSummaries:

    def test_constant_sample(self):
        """Zero spread"""
        s = summarize([2.0, 2.0, 2.0])
        assert s.mean == 2.0
        assert s.stddev == 0.0
        assert s.n == 3

    def test_sample_standard_deviation(self):
        """Standard deviation uses n - 1"""
        s = summarize([1.0, 2.0, 3.0])
        assert s.mean == pytest.approx(2.0)
        assert s.stddev == pytest.approx(1.0)
        assert (s.min, s.max) == (1.0, 3.0)

    def test_single_value(self):
        """One value has no spread"""
        assert summarize([4.2]).stddev == 0.0

    def test_empty_and_non_finite_rejected(self):
        """Empty samples and NaN are statistics errors"""
        with pytest.raises(StatisticsError):
            summarize([])
        with pytest.raises(StatisticsError):
            summarize([1.0, math.nan])

    def test_geometric_mean(self):
        assert geometric_mean([1.0, 4.0]) == pytest.approx(2.0)
        assert geometric_mean([2.0, 8.0, 4.0]) == pytest.approx(4.0)
        with pytest.raises(StatisticsError):
            geometric_mean([1.0, 0.0])

    def test_relative_difference(self):
        """Percent change of the second mean against the first"""
        assert relative_difference(summarize([2.0, 2.0]), summarize([3.0, 3.0])) == pytest.approx(50.0)
        assert relative_difference(summarize([0.0]), summarize([0.0])) == 0.0


class TestShapiroWilk:

    @pytest.mark.parametrize('n', [2, 51])
    def test_sample_size_range(self, n):
        """Only 3 to 50 values are accepted"""
        with pytest.raises(StatisticsError):
            shapiro_wilk(list(range(n)))

    def test_constant_sample_is_degenerate(self):
        """Zero variance is reported as non-normal"""
        result = shapiro_wilk([1.0] * 10)
        assert result.degenerate
        assert math.isnan(result.statistic)
        assert not result.is_normal(0.05)

    def test_bimodal_sample_is_not_normal(self):
        assert shapiro_wilk(BIMODAL).p_value < 0.05

    def test_normal_scores_are_normal(self):
        assert shapiro_wilk(normal_scores()).is_normal(0.05)


class TestPairedTests:

    def test_identical_samples(self):
        """No difference at all gives p = 1"""
        a = normal_scores(10)
        assert paired_t_test(a, a) == 1.0
        assert wilcoxon_signed_rank(a, a) == 1.0

    def test_shifted_samples(self):
        """A clear shift is detected"""
        a = normal_scores(15)
        jitter = np.where(np.arange(15) % 2 == 0, 0.01, -0.01)
        assert paired_t_test(a, a + 1.0 + jitter) < 0.001

    def test_constant_shift_is_maximally_significant(self):
        """Identical nonzero differences have zero variance and p = 0"""
        a = normal_scores(8)
        assert paired_t_test(a, a + 0.5) == 0.0

    def test_length_mismatch(self):
        """Paired samples must have equal length"""
        with pytest.raises(StatisticsError):
            paired_t_test([1.0, 2.0, 3.0], [1.0, 2.0])

    def test_too_few_pairs(self):
        with pytest.raises(StatisticsError):
            paired_t_test([1.0, 2.0], [2.0, 3.0])
        with pytest.raises(StatisticsError):
            wilcoxon_signed_rank([1.0, 2.0, 3.0, 4.0, 5.0], [2.0, 3.0, 4.0, 5.0, 7.0])

    def test_wilcoxon_one_sided_shift(self):
        """Every pair moving the same way over 20 pairs is significant"""
        a = normal_scores(20)
        b = a + np.linspace(0.5, 1.5, 20)
        assert wilcoxon_signed_rank(a, b) < 0.001

    def test_wilcoxon_large_sample_uses_approximation(self):
        """Above 25 pairs the normal approximation still gives a p-value in (0, 1]"""
        rng = np.random.default_rng(4)
        a = rng.normal(10.0, 1.0, 40)
        b = a + rng.normal(0.0, 0.1, 40)
        assert 0.0 < wilcoxon_signed_rank(a, b) <= 1.0


# reference values from R (swilk, t.test, wilcox.test)
SKEWED_20 = [0.11, 7.87, 4.61, 10.14, 7.95, 3.14, 0.46, 4.43, 0.21, 4.75,
             0.71, 1.52, 3.24, 0.93, 0.42, 4.97, 9.53, 4.55, 0.47, 6.66]
ROUGHLY_NORMAL_20 = [1.36, 1.14, 2.92, 2.55, 1.46, 1.06, 5.27, -1.11, 3.48, 1.10,
                     0.88, -0.51, 1.46, 0.52, 6.20, 1.69, 0.08, 3.67, 2.81, 3.49]
# extra sleep (hours) under two drugs, ten patients
SLEEP_DRUG_1 = [0.7, -1.6, -0.2, -1.2, -0.1, 3.4, 3.7, 0.8, 0.0, 2.0]
SLEEP_DRUG_2 = [1.9, 0.8, 1.1, 0.1, -0.1, 4.4, 5.5, 1.6, 4.6, 3.4]
# depression scale at first and second visit, nine patients
DEPRESSION_FIRST = [1.83, 0.50, 1.62, 2.48, 1.68, 1.88, 1.55, 3.06, 1.30]
DEPRESSION_SECOND = [0.878, 0.647, 0.598, 2.05, 1.06, 1.29, 1.06, 3.14, 1.29]


class TestReferenceDatasets:

    def test_shapiro_wilk_skewed(self):
        result = shapiro_wilk(SKEWED_20)
        assert result.statistic == pytest.approx(0.90047, abs=1e-4)
        assert result.p_value == pytest.approx(0.04209, abs=0.01)
        assert not result.is_normal(0.05)

    def test_shapiro_wilk_roughly_normal(self):
        result = shapiro_wilk(ROUGHLY_NORMAL_20)
        assert result.statistic == pytest.approx(0.95903, abs=1e-4)
        assert result.p_value == pytest.approx(0.52460, abs=0.01)
        assert result.is_normal(0.05)

    def test_paired_t_sleep(self):
        """t = -4.0621 on 9 degrees of freedom"""
        assert paired_t_test(SLEEP_DRUG_1, SLEEP_DRUG_2) == pytest.approx(0.002833, abs=0.005)

    def test_wilcoxon_depression(self):
        """V = 40; the exact two-sided p is 20/512"""
        p = wilcoxon_signed_rank(DEPRESSION_FIRST, DEPRESSION_SECOND)
        assert p == pytest.approx(0.039063, abs=0.005)


class TestCompare:

    def test_same_sample_is_equivalent(self):
        """A sample compared with itself"""
        a = normal_scores()
        report = compare(a, a)
        assert report.test == PAIRED_T
        assert report.p_value == 1.0
        assert report.verdict == EQUIVALENT
        assert report.relative_difference_pct == 0.0

    def test_shift_is_different(self):
        """Two normal samples, one shifted"""
        a = normal_scores()
        report = compare(a, a + 0.5, labels=('before', 'after'))
        assert report.test == PAIRED_T
        assert report.verdict == DIFFERENT
        assert report.labels == ('before', 'after')
        assert report.relative_difference_pct == pytest.approx(5.0)

    def test_non_normal_sample_uses_wilcoxon(self):
        """One non-normal sample switches to the signed-rank test"""
        report = compare(normal_scores(), BIMODAL)
        assert report.test == WILCOXON
        assert report.verdict == DIFFERENT
        assert report.normality_p[1] < 0.05

    def test_constant_samples_use_wilcoxon(self):
        """Degenerate normality falls through to the signed-rank test"""
        report = compare([1.0] * 8, [1.0] * 8)
        assert report.test == WILCOXON
        assert report.verdict == EQUIVALENT

    def test_alpha_bounds(self):
        with pytest.raises(StatisticsError):
            compare(normal_scores(), normal_scores(), alpha=1.5)

    def test_report_as_dict(self):
        """Serializable report"""
        data = compare(normal_scores(), normal_scores(), alpha=0.01).as_dict()
        assert data['alpha'] == 0.01
        assert data['stats'][0]['n'] == 20
        assert set(data) >= {'test', 'p_value', 'verdict', 'normality_p', 'relative_difference_pct'}
