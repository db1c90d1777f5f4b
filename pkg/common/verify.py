# common/verify.py
"""Comparison of computed summary quantities against reference values."""
import math
from typing import Sequence

import numpy as np

from constants import DEFAULT_EPSILON


def relative_error(computed: float, reference: float) -> float:
    """|computed - reference| / |reference|, or the absolute difference for a zero reference"""
    diff = abs(computed - reference)
    if reference == 0.0:
        return diff
    return diff / abs(reference)


def verify_scalar(computed: float, reference: float, epsilon: float = DEFAULT_EPSILON) -> bool:
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if not math.isfinite(computed):
        return False
    return relative_error(float(computed), float(reference)) <= epsilon


def verify_vector(computed: Sequence[float], reference: Sequence[float],
                  epsilon: float = DEFAULT_EPSILON) -> bool:
    """verify_scalar applied componentwise; lengths must agree"""
    computed = np.asarray(computed, dtype=np.float64).ravel()
    reference = np.asarray(reference, dtype=np.float64).ravel()
    if computed.shape != reference.shape:
        return False
    return all(verify_scalar(c, r, epsilon) for c, r in zip(computed, reference))
