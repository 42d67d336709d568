import numpy as np
import pytest
from scipy import stats

from app.exceptions import InvalidParameterError
from app.policy.kernel import estimate_mismatch_p, isolated_marginals, step_policy, uniform_drift_matrix
from app.policy.space import PolicyKernel, PolicySpace
from app.rng import NodeDraws
from app.schema import AdoptionRule

SPACE = PolicySpace(cardinality=4, canonical_policy=0)


def test_frozen_isolated_node():
    kernel = PolicyKernel(drift_rate=0.0)
    state = 2
    for _ in range(100):
        state = step_policy(state, [], kernel, None, SPACE)
    assert state == 2


def test_majority_of_inbox():
    assert step_policy(0, [2, 2, 3], PolicyKernel(), None, SPACE) == 2


def test_majority_ties_go_to_lowest_policy():
    assert step_policy(0, [3, 1, 3, 1], PolicyKernel(), None, SPACE) == 1


def test_stochastic_kernel_needs_a_stream():
    with pytest.raises(InvalidParameterError):
        step_policy(0, [], PolicyKernel(drift_rate=0.1), None, SPACE)


def test_uniform_random_peer_uses_the_first_draw():
    kernel = PolicyKernel(adoption_rule=AdoptionRule.UNIFORM_RANDOM_PEER)
    # sorted inbox is [1, 2, 3]; 0.5 * 3 picks index 1
    assert step_policy(0, [3, 1, 2], kernel, NodeDraws([0.5, 0.9, 0.9]), SPACE) == 2


def test_drift_jumps_uniformly():
    kernel = PolicyKernel(drift_rate=0.5)
    # no inbox: first draw decides the drift, second picks the policy
    assert step_policy(0, [], kernel, NodeDraws([0.1, 0.8, 0.0]), SPACE) == 3
    assert step_policy(0, [], kernel, NodeDraws([0.7, 0.8, 0.0]), SPACE) == 0


def test_isolated_drift_is_uniform_in_the_long_run():
    kernel = PolicyKernel(drift_rate=0.1)
    rng = np.random.default_rng(17)
    state, samples = 0, []
    for t in range(200000):
        state = step_policy(state, [], kernel, rng, SPACE)
        if t % 50 == 0:
            samples.append(state)
    counts = np.bincount(samples, minlength=4)
    assert stats.chisquare(counts).pvalue > 0.001


def test_drift_matrix_is_stochastic():
    matrix = uniform_drift_matrix(PolicyKernel(drift_rate=0.3), SPACE)
    assert np.allclose(matrix.sum(axis=1), 1.0)
    assert matrix[0, 0] == pytest.approx(0.7 + 0.3 / 4)


def test_isolated_marginals_converge_to_uniform():
    marginals = isolated_marginals(PolicyKernel(drift_rate=0.2), SPACE, None, 200)
    assert marginals.shape == (201, 4)
    assert marginals[0].tolist() == [1.0, 0.0, 0.0, 0.0]
    assert np.allclose(marginals[-1], 0.25)


@pytest.mark.parametrize("drift_rate", [0.01, 0.2, 1.0])
@pytest.mark.parametrize("start", [0, 3])
def test_isolated_entropy_never_decreases(drift_rate, start):
    marginals = isolated_marginals(PolicyKernel(drift_rate=drift_rate), SPACE, start, 300)
    entropies = [stats.entropy(row, base=2) for row in marginals]
    assert entropies[0] == 0.0
    for before, after in zip(entropies, entropies[1:]):
        assert after >= before - 1e-12
    assert entropies[-1] == pytest.approx(2.0, abs=1e-6)


def test_mismatch_without_drift_is_zero():
    assert estimate_mismatch_p(PolicyKernel(), SPACE, 100, 500, seed=1) == 0.0


def test_mismatch_long_horizon():
    p = estimate_mismatch_p(PolicyKernel(drift_rate=0.2), SPACE, 200, 20000, seed=2)
    assert p == pytest.approx(0.75, abs=4 * np.sqrt(0.75 * 0.25 / 20000))


def test_mismatch_single_uniform_draw():
    space = PolicySpace(cardinality=2)
    p = estimate_mismatch_p(PolicyKernel(drift_rate=1.0), space, 1, 20000, seed=3)
    assert p == pytest.approx(0.5, abs=4 * np.sqrt(0.25 / 20000))


def test_mismatch_is_seeded():
    kernel = PolicyKernel(drift_rate=0.1)
    assert estimate_mismatch_p(kernel, SPACE, 30, 1000, seed=5) == estimate_mismatch_p(
        kernel, SPACE, 30, 1000, seed=5
    )
