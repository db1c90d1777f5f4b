# harness/statistics.py
"""
Timing statistics and the two-sample comparison used by `npb compare`.

compare() tests both samples for normality (Shapiro-Wilk); when both look
normal the paired t-test decides, otherwise the Wilcoxon signed-rank test.
"""
import logging
import math
import warnings
from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

import settings
from constants import (
    SHAPIRO_MAX_N, SHAPIRO_MIN_N, TTEST_MIN_N, WILCOXON_EXACT_MAX_N, WILCOXON_MIN_N,
)
from error_handler import StatisticsError

logger = logging.getLogger(__name__)

PAIRED_T = 'paired-t'
WILCOXON = 'wilcoxon'
EQUIVALENT = 'equivalent'
DIFFERENT = 'different'


@dataclass(frozen=True)
class SampleStats:
    values: Tuple[float, ...]
    mean: float
    stddev: float
    min: float
    max: float

    @property
    def n(self) -> int:
        return len(self.values)

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['values'] = list(self.values)
        data['n'] = self.n
        return data


@dataclass(frozen=True)
class NormalityResult:
    statistic: float
    p_value: float
    degenerate: bool = False

    def is_normal(self, alpha: float) -> bool:
        return not self.degenerate and self.p_value >= alpha


@dataclass(frozen=True)
class ComparisonReport:
    labels: Tuple[str, str]
    stats: Tuple[SampleStats, SampleStats]
    normality_p: Tuple[float, float]
    test: str
    p_value: float
    verdict: str
    relative_difference_pct: float
    alpha: float = 0.05

    def as_dict(self) -> Dict[str, Any]:
        return {
            'labels': list(self.labels),
            'stats': [s.as_dict() for s in self.stats],
            'normality_p': list(self.normality_p),
            'test': self.test,
            'p_value': self.p_value,
            'verdict': self.verdict,
            'relative_difference_pct': self.relative_difference_pct,
            'alpha': self.alpha,
        }


def _as_array(sample: Sequence[float], name: str = 'sample') -> np.ndarray:
    values = np.asarray(list(sample), dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise StatisticsError(f"{name} must be a non-empty sequence of numbers")
    if not np.all(np.isfinite(values)):
        raise StatisticsError(f"{name} contains non-finite values")
    return values


def _paired(a: Sequence[float], b: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    x = _as_array(a, 'first sample')
    y = _as_array(b, 'second sample')
    if x.size != y.size:
        raise StatisticsError(f"paired samples differ in length ({x.size} vs {y.size})")
    return x, y


def summarize(samples: Sequence[float]) -> SampleStats:
    """Mean, sample standard deviation (n-1), min and max"""
    values = _as_array(samples)
    stddev = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return SampleStats(
        values=tuple(float(v) for v in values),
        mean=float(np.mean(values)),
        stddev=stddev,
        min=float(values.min()),
        max=float(values.max()),
    )


def geometric_mean(values: Sequence[float]) -> float:
    data = _as_array(values, 'values')
    if np.any(data <= 0.0):
        raise StatisticsError("geometric mean needs strictly positive values")
    return float(stats.gmean(data))


def shapiro_wilk(sample: Sequence[float]) -> NormalityResult:
    """
    Shapiro-Wilk normality test for 3 <= n <= 50.

    A zero-variance sample has no defined W; it is reported as degenerate
    (statistic nan, p 0) and therefore treated as non-normal.
    """
    values = _as_array(sample)
    if not SHAPIRO_MIN_N <= values.size <= SHAPIRO_MAX_N:
        raise StatisticsError(
            f"Shapiro-Wilk needs between {SHAPIRO_MIN_N} and {SHAPIRO_MAX_N} values, got {values.size}"
        )
    if np.ptp(values) == 0.0:
        return NormalityResult(statistic=math.nan, p_value=0.0, degenerate=True)
    result = stats.shapiro(values)
    return NormalityResult(statistic=float(result.statistic), p_value=float(result.pvalue))


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided p-value of the paired t-test"""
    x, y = _paired(a, b)
    if x.size < TTEST_MIN_N:
        raise StatisticsError(f"paired t-test needs at least {TTEST_MIN_N} pairs, got {x.size}")
    diff = x - y
    if np.all(diff == 0.0):
        return 1.0
    if np.ptp(diff) == 0.0:
        # every pair shifted by the same nonzero amount: t is infinite
        return 0.0
    return float(stats.ttest_rel(x, y).pvalue)


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float]) -> float:
    """
    Two-sided p-value of the Wilcoxon signed-rank test.

    Exact distribution up to 25 pairs, normal approximation with continuity
    correction above.
    """
    x, y = _paired(a, b)
    diff = x - y
    if np.all(diff == 0.0):
        return 1.0
    if x.size < WILCOXON_MIN_N:
        raise StatisticsError(f"signed-rank test needs at least {WILCOXON_MIN_N} pairs, got {x.size}")
    method = 'exact' if x.size <= WILCOXON_EXACT_MAX_N else 'approx'
    with warnings.catch_warnings():
        # scipy falls back to the approximation itself when zeros or ties rule out the exact table
        warnings.simplefilter('ignore', UserWarning)
        result = stats.wilcoxon(x, y, zero_method='wilcox', correction=True,
                                alternative='two-sided', method=method)
    return float(result.pvalue)


def relative_difference(a: SampleStats, b: SampleStats) -> float:
    """Difference of means in percent of the first sample's mean"""
    if a.mean == 0.0:
        return 0.0 if b.mean == 0.0 else math.inf
    return (b.mean - a.mean) * 100.0 / a.mean


def compare(a: Sequence[float], b: Sequence[float], alpha: Optional[float] = None,
            labels: Tuple[str, str] = ('a', 'b')) -> ComparisonReport:
    """Normality check on both samples, test selection, verdict at 1 - alpha confidence"""
    alpha = settings.NPB_ALPHA if alpha is None else alpha
    if not 0.0 < alpha < 1.0:
        raise StatisticsError(f"alpha must lie in (0, 1), got {alpha}")
    x, y = _paired(a, b)

    normal_a = shapiro_wilk(x)
    normal_b = shapiro_wilk(y)
    if normal_a.is_normal(alpha) and normal_b.is_normal(alpha):
        test, p_value = PAIRED_T, paired_t_test(x, y)
    else:
        test, p_value = WILCOXON, wilcoxon_signed_rank(x, y)

    stats_a, stats_b = summarize(x), summarize(y)
    verdict = DIFFERENT if p_value < alpha else EQUIVALENT
    logger.debug("compare %s vs %s: normality p=(%.3g, %.3g) test=%s p=%.3g -> %s",
                 labels[0], labels[1], normal_a.p_value, normal_b.p_value, test, p_value, verdict)

    return ComparisonReport(
        labels=tuple(labels),
        stats=(stats_a, stats_b),
        normality_p=(normal_a.p_value, normal_b.p_value),
        test=test,
        p_value=p_value,
        verdict=verdict,
        relative_difference_pct=relative_difference(stats_a, stats_b),
        alpha=alpha,
    )
