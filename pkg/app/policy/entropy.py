from typing import Dict, Mapping, Sequence

import numpy as np
from scipy import stats

from app.exceptions import NormalizationError, UnknownNodeError

NORMALIZATION_TOLERANCE = 1e-9


def _checked(vector: Sequence[float]) -> np.ndarray:
    arr = np.asarray(vector, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise NormalizationError("probability vector must be a non-empty 1-d sequence")
    if np.any(arr < 0) or abs(arr.sum() - 1.0) > NORMALIZATION_TOLERANCE:
        raise NormalizationError(f"vector {arr.tolist()} is not a probability distribution")
    return arr


def policy_entropy(marginal: Sequence[float]) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    return float(stats.entropy(_checked(marginal), base=2))


def empirical_entropy(states: Sequence[int], cardinality: int) -> float:
    """Entropy in bits of the empirical distribution of ``states``."""
    counts = np.bincount(np.asarray(states, dtype=int), minlength=cardinality)
    if counts.sum() == 0:
        return 0.0
    return float(stats.entropy(counts, base=2))


def redundant_entropy(
    decisions: Mapping[int, Sequence[float]], enforcer_flags: Dict[int, bool]
) -> float:
    """Total verdict entropy over the nodes whose decisions enforce nothing."""
    total = 0.0
    for node, vector in decisions.items():
        if node not in enforcer_flags:
            raise UnknownNodeError(node)
        h = policy_entropy(vector)
        if not enforcer_flags[node]:
            total += h
    return total
