import pytest

from app.exceptions import DomainError, NormalizationError, UnknownNodeError
from app.policy.divergence import divergence_lower_bound, divergence_metric
from app.policy.entropy import empirical_entropy, policy_entropy, redundant_entropy
from app.policy.space import PolicyVector


def test_policy_entropy_values():
    assert policy_entropy([1.0, 0.0, 0.0]) == 0.0
    assert policy_entropy([0.25] * 4) == pytest.approx(2.0)
    assert policy_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5)


@pytest.mark.parametrize("vector", [[0.5, 0.6], [-0.1, 1.1], []])
def test_policy_entropy_rejects_non_distributions(vector):
    with pytest.raises(NormalizationError):
        policy_entropy(vector)


def test_empirical_entropy():
    assert empirical_entropy([0, 1, 2, 3], 4) == pytest.approx(2.0)
    assert empirical_entropy([1, 1, 1], 4) == 0.0
    assert empirical_entropy([], 4) == 0.0


def test_redundant_entropy():
    decisions = {0: [0.5, 0.5], 1: [0.5, 0.5], 2: [0.25, 0.75]}
    assert redundant_entropy(decisions, {0: True, 1: True, 2: True}) == 0.0
    assert redundant_entropy({0: [0.5, 0.5]}, {0: False}) == pytest.approx(1.0)
    mixed = redundant_entropy(decisions, {0: False, 1: True, 2: False})
    assert mixed == pytest.approx(policy_entropy([0.5, 0.5]) + policy_entropy([0.25, 0.75]))
    with pytest.raises(UnknownNodeError):
        redundant_entropy({4: [1.0]}, {})


def test_divergence_metric():
    assert divergence_metric([1, 1, 1]) == 0.0
    assert divergence_metric(PolicyVector(states={0: 0, 1: 1})) == 0.5


@pytest.mark.parametrize("states", [[0, 1, 2], [0, 0, 1, 1, 3], [2, 1, 2, 0, 0, 1]])
def test_divergence_metric_matches_pair_recount(states):
    n = len(states)
    disagreeing = sum(1 for a in states for b in states if a != b)
    assert divergence_metric(states) == pytest.approx(disagreeing / n**2)


def test_divergence_lower_bound():
    assert divergence_lower_bound(10, 0, 0.7) == 0.0
    assert divergence_lower_bound(10, 2, 0.5) == pytest.approx(0.08)
    assert divergence_lower_bound(10, 10, 1.0) == 0.0
    with pytest.raises(DomainError):
        divergence_lower_bound(10, 11, 0.5)
    with pytest.raises(DomainError):
        divergence_lower_bound(10, 2, 1.5)
