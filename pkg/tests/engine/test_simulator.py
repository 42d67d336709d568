import numpy as np
import pytest
from pydantic import ValidationError

from app.adversary.config import AdversaryConfig
from app.engine.config import SimConfig
from app.engine.export import trace_csv, trace_digest
from app.engine.metrics import divergence_probability, global_chain_sequence, ledger_monotonicity_violations
from app.engine.simulator import Simulator, run_simulation, within_class_disagreement
from app.experiment.stats import one_sided_greater
from app.ledger.fork_choice import tip_key
from app.policy.space import PolicyKernel
from app.schema import MessageKind, NodeRole
from app.topology.generator import assign_roles, attach_to_miners, generate_watts_strogatz
from app.topology.graph import SPV, NodeClass
from tests.helpers import complete_pairs, make_graph


def _network(seed=3, n=30, miners=4):
    graph = assign_roles(generate_watts_strogatz(n, 4, 0.2, seed, lat_max=2), miners, 0.3, seed=seed)
    return attach_to_miners(graph, graph.nodes_with_role(NodeRole.SPV), seed)


def test_single_miner_converges(single_miner_line):
    config = SimConfig(graph=single_miner_line, ticks=200, block_rate=0.2, seed=1, quiet_tail=10)
    trace = run_simulation(config)
    final = trace.frame()
    assert final.global_tip != 0
    assert final.deltas.tolist() == [0, 0, 0, 0]
    assert ledger_monotonicity_violations(trace) == []


def test_eclipsed_spv_diverges_while_miner_peered_spv_follows():
    # 0, 1 miners; 2 home node; 3 SPV peered to miner 1; 4 SPV eclipsed by relay 5
    roles = {0: NodeClass.miner(0.5), 1: NodeClass.miner(0.5), 3: SPV, 4: SPV}
    graph = make_graph(6, [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5), (0, 5)], roles=roles)
    adversary = AdversaryConfig(
        alpha=0.2,
        miner_id=0,
        adversary_nodes=[5],
        eclipse_targets=[4],
        invalid_injection_rate=1.0,
    )
    config = SimConfig(graph=graph, ticks=80, block_rate=0.4, adversary=adversary, seed=5, quiet_tail=10)
    trace = run_simulation(config)
    final = trace.frame()
    assert final.global_tip != 0
    assert final.deltas[4] == 1
    assert final.deltas[3] == 0
    assert all(trace.tree[b].producer == 1 for b in global_chain_sequence(trace)[1:])
    victims = {r.target for r in trace.fault_records}
    assert 4 in victims
    assert all(r.message_kind == MessageKind.INVALID_BLOCK for r in trace.fault_records)
    assert all(r.caused_deviation is not None for r in trace.fault_records)


def test_same_config_gives_identical_trace():
    config = SimConfig(
        graph=_network(),
        ticks=60,
        block_rate=0.3,
        kernel=PolicyKernel(drift_rate=0.05),
        seed=11,
        hfn_validation_delay=1,
    )
    first, second = run_simulation(config, "abc"), run_simulation(config, "abc")
    assert trace_csv(first) == trace_csv(second)
    assert trace_digest(first) == trace_digest(second)
    assert trace_csv(first).splitlines()[0] == "# config_hash=abc seed=11"


def test_miners_hold_their_best_known_valid_tip():
    config = SimConfig(graph=_network(seed=7), ticks=80, block_rate=0.5, seed=7)
    simulator = Simulator(config)
    simulator.run()
    for miner in config.graph.miners:
        known = simulator.known[miner]
        best = max(
            (b for b in known if simulator.tree.chain_valid(b)),
            key=lambda b: tip_key(simulator.tree.path_work(b), known[b], b),
        )
        assert simulator.tips[miner] == best


def test_global_chain_is_monotone_and_miner_built():
    adversary = AdversaryConfig(alpha=0.3, partition_probability=0.0)
    config = SimConfig(graph=_network(seed=2), ticks=120, block_rate=0.4, adversary=adversary, seed=2)
    trace = run_simulation(config)
    assert ledger_monotonicity_violations(trace) == []
    assert trace.horizon == 120
    assert len(trace.frames) == 121


def test_inverting_home_verdicts_leaves_the_global_chain_alone():
    base = dict(
        graph=_network(seed=4),
        ticks=80,
        block_rate=0.3,
        kernel=PolicyKernel(drift_rate=0.05),
        seed=4,
        hfn_validation_delay=1,
        initial_policy_mismatch=0.2,
    )
    normal = run_simulation(SimConfig(**base))
    inverted = run_simulation(SimConfig(**base, invert_local_verdicts=True))
    assert [f.global_tip for f in normal.frames] == [f.global_tip for f in inverted.frames]


def test_config_validation(single_miner_line):
    with pytest.raises(ValidationError):
        SimConfig(graph=make_graph(3, [(0, 1)]), ticks=5, block_rate=0.0)
    with pytest.raises(ValidationError):
        SimConfig(graph=single_miner_line, ticks=5, quiet_tail=6)
    with pytest.raises(ValidationError):
        SimConfig(graph=make_graph(2, [(0, 1)]), ticks=5, block_rate=0.1)
    with pytest.raises(ValidationError):
        SimConfig(graph=single_miner_line, ticks=5, adversary=AdversaryConfig(alpha=0.2))
    with pytest.raises(ValidationError):
        SimConfig(graph=single_miner_line, ticks=5, adversary=AdversaryConfig(adversary_nodes=[9]))


def test_adversary_owning_every_miner_is_rejected():
    roles = {0: NodeClass.miner(0.5), 1: NodeClass.miner(0.5)}
    graph = make_graph(4, [(0, 1), (1, 2), (2, 3)], roles=roles)
    owned = AdversaryConfig(alpha=0.3, miner_id=0, adversary_nodes=[1])
    with pytest.raises(ValidationError, match="outside the adversary"):
        SimConfig(graph=graph, ticks=40, block_rate=0.5, adversary=owned)
    with pytest.raises(ValidationError, match="outside the adversary"):
        SimConfig(graph=graph, ticks=40, block_rate=0.5, adversary=AdversaryConfig(adversary_nodes=[0, 1]))

    # one honest miner left is enough to keep producing
    relay = AdversaryConfig(alpha=0.3, miner_id=0, adversary_nodes=[3])
    trace = run_simulation(SimConfig(graph=graph, ticks=40, block_rate=0.5, adversary=relay, seed=2))
    assert len(trace.frames) == 41


def test_within_class_disagreement():
    tips = np.array([1, 1, 2, 2, 3])
    assert within_class_disagreement(tips, np.array([0, 1])) == 0.0
    assert within_class_disagreement(tips, np.array([1, 2])) == 1.0
    assert within_class_disagreement(tips, np.array([0, 1, 2, 3])) == pytest.approx(4 / 6)
    assert within_class_disagreement(tips, np.array([4])) == 0.0


@pytest.mark.slow
def test_home_nodes_diverge_more_than_spv_clients_under_attack():
    # honest miners 1-3 each serve one SPV client and one home node; miner 0 and relay 10 are hostile
    roles = {m: NodeClass.miner(0.25) for m in range(4)}
    roles.update({s: SPV for s in (4, 5, 6)})
    pairs = complete_pairs(range(4))
    pairs += [(m, m + 3) for m in (1, 2, 3)] + [(m, m + 6) for m in (1, 2, 3)]
    pairs += [(10, v) for v in range(4, 10)]
    graph = make_graph(11, pairs, roles=roles)
    adversary = AdversaryConfig(alpha=0.3, miner_id=0, adversary_nodes=[10], invalid_injection_rate=1.0)

    hfn, spv = [], []
    for seed in range(300):
        trace = run_simulation(
            SimConfig(graph=graph, ticks=60, block_rate=0.3, adversary=adversary, seed=seed, hfn_validation_delay=2)
        )
        hfn.append(divergence_probability([trace], NodeRole.HFN))
        spv.append(divergence_probability([trace], NodeRole.SPV))
    assert all(h >= s for h, s in zip(hfn, spv))
    assert np.mean(hfn) > np.mean(spv)
    assert one_sided_greater(hfn, spv) < 0.01
