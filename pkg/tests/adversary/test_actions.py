import numpy as np
import pytest
from pydantic import ValidationError

from app.adversary.actions import apply_delay, eclipse, partition_edges, prepare_network
from app.adversary.config import AdversaryConfig
from app.exceptions import InvalidParameterError
from tests.helpers import complete_pairs, make_graph


def test_partition_with_zero_probability_keeps_the_graph(k5):
    assert partition_edges(k5, 0.0, seed=1) == k5


def test_partition_removal_frequency_on_one_edge():
    graph = make_graph(2, [(0, 1)])
    removed = sum(len(partition_edges(graph, 0.9, seed=s).edges) == 0 for s in range(5000))
    assert removed / 5000 == pytest.approx(0.9, abs=4 * np.sqrt(0.09 / 5000))


def test_partition_of_k4_keeps_half_the_edges_on_average():
    graph = make_graph(4, complete_pairs(range(4)))
    survivors = [len(partition_edges(graph, 0.5, seed=s).edges) for s in range(2000)]
    assert np.mean(survivors) == pytest.approx(3.0, abs=4 * np.sqrt(1.5 / 2000))


def test_partition_rejects_certain_removal(k5):
    with pytest.raises(InvalidParameterError):
        partition_edges(k5, 1.0, seed=0)


def test_eclipse_leaves_only_adversary_peers():
    graph = make_graph(5, [(0, 1), (0, 2), (0, 3), (3, 4)])
    eclipsed = eclipse(graph, 0, [4])
    assert eclipsed.neighbors(0) == [4]
    assert eclipsed.has_edge(3, 4)


def test_eclipse_of_already_isolated_target_is_a_no_op():
    graph = make_graph(3, [(0, 2), (1, 2)])
    assert eclipse(graph, 0, [2]) == graph


def test_eclipse_rejects_adversarial_target(path4):
    with pytest.raises(InvalidParameterError):
        eclipse(path4, 1, [1])


def test_delay_touches_only_delayed_edges(path4):
    delayed = apply_delay(path4, [0], 5, seed=3)
    assert 1 <= delayed.latency(0, 1) <= 6
    assert delayed.latency(1, 2) == 1
    assert delayed.latency(2, 3) == 1


def test_prepare_network_without_adversary_is_identity(k5):
    assert prepare_network(k5, AdversaryConfig()) == k5


def test_config_validation():
    with pytest.raises(ValidationError):
        AdversaryConfig(eclipse_targets=[1], adversary_nodes=[1])
    with pytest.raises(ValidationError):
        AdversaryConfig(eclipse_targets=[1])
    with pytest.raises(ValidationError):
        AdversaryConfig(alpha=0.5)
    with pytest.raises(ValidationError):
        AdversaryConfig(unknown_knob=1)
    assert AdversaryConfig(alpha=0.2).active
    assert not AdversaryConfig().active
