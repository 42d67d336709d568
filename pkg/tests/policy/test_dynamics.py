import numpy as np

from app.policy.dynamics import PolicyDynamics, redundant_nodes, write_policy_trajectories
from app.policy.kernel import step_policy
from app.policy.space import PolicyKernel, PolicySpace
from app.rng import NodeDraws, tick_draws
from app.schema import AdoptionRule
from app.topology.generator import add_isolated, generate_watts_strogatz

SPACE = PolicySpace(cardinality=4, canonical_policy=0)


def _reference_run(graph, kernel, seed, initial, ticks):
    """Per-node scalar stepping with latency-delayed inboxes."""
    history = [np.array(initial)]
    for tick in range(1, ticks + 1):
        previous = history[-1]
        draws = tick_draws(seed, tick, graph.node_count)
        new = previous.copy()
        for node in graph.nodes:
            inbox = []
            for peer in graph.neighbors(node):
                seen = max(tick - graph.latency(node, peer), 0)
                inbox.append(int(history[seen][peer]))
            new[node] = step_policy(int(previous[node]), inbox, kernel, NodeDraws(draws[node]), SPACE)
        history.append(new)
    return history


def test_vectorised_steps_match_scalar_kernel():
    graph = add_isolated(generate_watts_strogatz(12, 4, 0.3, seed=4, lat_min=1, lat_max=3), 2)
    initial = list(np.arange(graph.node_count) % 4)
    for rule in AdoptionRule:
        kernel = PolicyKernel(drift_rate=0.2, adoption_rule=rule)
        dynamics = PolicyDynamics(graph, kernel, SPACE, seed=9, initial=initial)
        vectorised = [dynamics.current.copy()] + dynamics.run(15)
        reference = _reference_run(graph, kernel, 9, initial, 15)
        for a, b in zip(vectorised, reference):
            assert a.tolist() == b.tolist()


def test_connected_graph_converges_without_drift():
    graph = generate_watts_strogatz(20, 4, 0.0, seed=1)
    initial = [0] * 14 + [2] * 6
    dynamics = PolicyDynamics(graph, PolicyKernel(), SPACE, seed=1, initial=initial)
    dynamics.run(60)
    assert len(set(dynamics.current.tolist())) == 1


def test_advertised_nodes_never_change():
    graph = generate_watts_strogatz(10, 2, 0.0, seed=1)
    dynamics = PolicyDynamics(graph, PolicyKernel(drift_rate=0.5), SPACE, seed=3, advertised={0: 3})
    for states in dynamics.run(20):
        assert states[0] == 3


def test_redundant_nodes_and_export(tmp_path):
    graph = add_isolated(generate_watts_strogatz(8, 2, 0.0, seed=1), 2)
    assert redundant_nodes(graph) == [8, 9]
    dynamics = PolicyDynamics(graph, PolicyKernel(drift_rate=0.1), SPACE, seed=2)
    trajectory = [dynamics.current.copy()] + dynamics.run(3)
    path = write_policy_trajectories(tmp_path / "p.csv", trajectory, {8, 9}, header="seed=2")
    lines = path.read_text().splitlines()
    assert lines[0] == "# seed=2"
    assert lines[1] == "tick,node_id,policy,is_redundant"
    assert len(lines) == 2 + 4 * 10
    assert lines[-1].startswith("3,9,") and lines[-1].endswith(",1")
    assert dynamics.vector().tick == 3
