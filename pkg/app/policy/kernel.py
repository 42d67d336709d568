from collections import Counter
from typing import Collection, Optional

import numpy as np

from app.exceptions import InvalidParameterError
from app.policy.space import PolicyKernel, PolicySpace
from app.rng import MISMATCH, make_rng
from app.schema import AdoptionRule


def step_policy(
    current: int,
    inbox: Collection[int],
    kernel: PolicyKernel,
    rng,
    space: PolicySpace,
) -> int:
    """One kernel step for a single node.

    ``rng`` needs ``random()`` and ``integers(high)``; a numpy Generator or
    ``app.rng.NodeDraws`` both work. It may be None when the kernel draws
    nothing (zero drift, majority adoption).
    """
    if rng is None and not kernel.is_deterministic:
        raise InvalidParameterError("a random stream is required for a stochastic kernel")

    state = current
    if inbox:
        if kernel.adoption_rule == AdoptionRule.MAJORITY_OF_INBOX:
            counts = Counter(inbox)
            top = max(counts.values())
            state = min(policy for policy, count in counts.items() if count == top)
        else:
            ordered = sorted(inbox)
            state = ordered[int(rng.integers(len(ordered)))]

    if kernel.drift_rate > 0.0 and rng.random() < kernel.drift_rate:
        state = int(rng.integers(space.cardinality))
    return int(state)


def uniform_drift_matrix(kernel: PolicyKernel, space: PolicySpace) -> np.ndarray:
    """Transition matrix of an isolated node: stay, or jump uniformly with prob xi."""
    k = space.cardinality
    xi = kernel.drift_rate
    return (1.0 - xi) * np.eye(k) + (xi / k) * np.ones((k, k))


def isolated_marginals(
    kernel: PolicyKernel, space: PolicySpace, start: Optional[int], horizon: int
) -> np.ndarray:
    """Exact state distribution of an isolated node for t = 0..horizon.

    Row t is the marginal at tick t starting from a point mass on ``start``
    (the canonical policy when None).
    """
    if horizon < 0:
        raise InvalidParameterError(f"horizon must be >= 0, got {horizon}")
    start = space.canonical_policy if start is None else start
    transition = uniform_drift_matrix(kernel, space)
    marginals = np.zeros((horizon + 1, space.cardinality))
    marginals[0, start] = 1.0
    for t in range(1, horizon + 1):
        marginals[t] = marginals[t - 1] @ transition
    return marginals


def estimate_mismatch_p(
    kernel: PolicyKernel,
    space: PolicySpace,
    horizon: int,
    replications: int,
    seed: int,
    start: Optional[int] = None,
) -> float:
    """Monte Carlo P[isolated node is off the canonical policy at the horizon]."""
    if replications < 1:
        raise InvalidParameterError(f"replications must be >= 1, got {replications}")
    if horizon < 0:
        raise InvalidParameterError(f"horizon must be >= 0, got {horizon}")
    rng = make_rng(seed, MISMATCH)
    states = np.full(replications, space.canonical_policy if start is None else start)
    if kernel.drift_rate > 0.0:
        for _ in range(horizon):
            drift = rng.random(replications) < kernel.drift_rate
            states[drift] = rng.integers(space.cardinality, size=int(drift.sum()))
    return float(np.mean(states != space.canonical_policy))
