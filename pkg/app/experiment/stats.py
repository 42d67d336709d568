import math
from typing import Sequence

import numpy as np
from scipy import stats


def mean(values: Sequence[float]) -> float:
    return float(np.mean(values)) if len(values) else 0.0


def standard_error(values: Sequence[float]) -> float:
    """Sample standard error; 0 for fewer than two values."""
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def one_sided_greater(a: Sequence[float], b: Sequence[float]) -> float:
    """p-value of the paired one-sided test mean(a - b) > 0.

    Constant differences have no variance to test; they give 0 when every
    difference is positive and 1 otherwise.
    """
    diffs = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if diffs.size == 0:
        return 1.0
    if diffs.size < 2 or np.ptp(diffs) == 0:
        return 0.0 if np.all(diffs > 0) else 1.0
    return float(stats.ttest_rel(a, b, alternative="greater").pvalue)


def binomial_consistent(successes: int, trials: int, p: float, level: float) -> bool:
    """Exact two-sided binomial test does not reject p at ``level``."""
    if p <= 0.0:
        return successes == 0
    if p >= 1.0:
        return successes == trials
    return bool(stats.binomtest(successes, trials, p).pvalue >= level)


def strictly_increasing(values: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))
