# harness/compare.py
"""Pairing of two result files for `npb compare`"""
import logging
from collections import OrderedDict
from typing import Any, Dict, List, Optional, Sequence, Tuple

from error_handler import StatisticsError
from harness.statistics import ComparisonReport, compare

logger = logging.getLogger(__name__)


def group_by_key(records: Sequence[Dict[str, Any]], key_columns: Sequence[str]) -> "OrderedDict":
    """key tuple -> {rep: seconds} over verified records"""
    groups: "OrderedDict[Tuple, Dict[int, float]]" = OrderedDict()
    for record in records:
        if not record['verified']:
            continue
        key = tuple(record[c] for c in key_columns)
        groups.setdefault(key, {})[record['rep']] = record['seconds']
    return groups


def compare_records(records_a: Sequence[Dict[str, Any]], records_b: Sequence[Dict[str, Any]],
                    key_columns: Sequence[str], labels: Tuple[str, str] = ('a', 'b'),
                    alpha: Optional[float] = None) -> List[Tuple[Dict[str, Any], ComparisonReport]]:
    """
    One ComparisonReport per key present in both files.

    Samples are paired by repetition number; keys whose samples cannot be
    tested (too few common repetitions) are skipped with a warning.
    """
    groups_a = group_by_key(records_a, key_columns)
    groups_b = group_by_key(records_b, key_columns)
    reports = []
    for key, reps_a in groups_a.items():
        reps_b = groups_b.get(key)
        if reps_b is None:
            continue
        common = sorted(set(reps_a) & set(reps_b))
        key_dict = dict(zip(key_columns, key))
        try:
            report = compare([reps_a[r] for r in common], [reps_b[r] for r in common],
                             alpha=alpha, labels=labels)
        except StatisticsError as e:
            logger.warning("Skipping %s: %s", key_dict, e)
            continue
        reports.append((key_dict, report))

    if not reports:
        raise StatisticsError("no key has enough paired repetitions in both files")
    return reports
