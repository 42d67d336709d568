from typing import Sequence, Union

import numpy as np

from app.exceptions import DomainError, InvalidParameterError
from app.policy.space import PolicyVector


def divergence_metric(policies: Union[PolicyVector, Sequence[int], np.ndarray]) -> float:
    """Fraction of ordered node pairs (i, j) holding different policies.

    The diagonal counts as agreement, so the denominator is |V|^2.
    """
    if isinstance(policies, PolicyVector):
        values = np.fromiter(policies.states.values(), dtype=np.int64)
    else:
        values = np.asarray(policies, dtype=np.int64)
    n = values.size
    if n == 0:
        raise InvalidParameterError("divergence_metric needs at least one node")
    _, counts = np.unique(values, return_counts=True)
    agreeing = int(np.sum(counts.astype(np.int64) ** 2))
    return (n * n - agreeing) / (n * n)


def divergence_lower_bound(total_nodes: int, redundant_count: int, mismatch_p: float) -> float:
    """|R| (|V| - |R|) / |V|^2 * p"""
    if total_nodes < 1:
        raise DomainError(f"total_nodes must be >= 1, got {total_nodes}")
    if not 0 <= redundant_count <= total_nodes:
        raise DomainError(f"redundant_count must lie in [0, {total_nodes}], got {redundant_count}")
    if not 0.0 <= mismatch_p <= 1.0:
        raise DomainError(f"mismatch_p must lie in [0, 1], got {mismatch_p}")
    return redundant_count * (total_nodes - redundant_count) / total_nodes**2 * mismatch_p
