import pytest

from app.engine.simulator import run_simulation
from app.experiment import run_experiment
from app.experiment.builders import build_graph, build_sim_config
from app.experiment.config import parse_experiment_config
from app.schema import TxClass
from app.surplus.accounting import classify_trace_transactions, decision_latency_excess

SMALL_NETWORK = {
    "topology": {"n": 24, "k": 4, "beta": 0.2, "lat_min": 1, "lat_max": 2, "miner_count": 3, "core_extra_edges": 3},
    "simulation": {"ticks": 40, "block_rate": 0.3, "hfn_validation_delay": 1},
}


def _run(kind, replications=2, **sections):
    data = {"experiment": {"kind": kind, "replications": replications, "base_seed": 11}, **sections}
    return run_experiment(parse_experiment_config(data), workers=1)


def test_equilibrium():
    bundle = _run("equilibrium", replications=5, game={"nodes": 12, "miners": 2, "enumeration_max_nodes": 4})
    assert bundle.passed
    assert bundle.aggregates["in_spv_dominance_regime"] is True
    assert bundle.aggregates["max_rounds_used"] <= 2


def test_topology_claims():
    bundle = _run(
        "topology_claims",
        replications=3,
        topology={"n": 30, "k": 4, "beta": 0.2, "miner_count": 5, "core_extra_edges": 0, "attach_spv_to_miners": False},
        sweep={"peripheral_nodes": 20},
    )
    assert bundle.passed
    assert all(r["diameter_after"] >= r["diameter_before"] for r in bundle.rows)


def test_spv_baseline():
    bundle = _run("spv_baseline", replications=3, **SMALL_NETWORK)
    assert bundle.passed
    assert bundle.aggregates["max_spv_divergence"] == 0.0


def test_enforcement_inertness():
    bundle = _run(
        "enforcement_inertness",
        policy={"drift_rate": 0.05},
        **{**SMALL_NETWORK, "simulation": {**SMALL_NETWORK["simulation"], "initial_policy_mismatch": 0.3}},
    )
    assert bundle.passed
    assert bundle.aggregates["identical"] == 2


def test_partition_divergence_rows():
    bundle = _run("partition_divergence", sweep={"partition_probabilities": [0.1, 0.3]}, **SMALL_NETWORK)
    assert len(bundle.rows) == 4
    assert set(bundle.aggregates) == {"0.1", "0.3"}
    assert [r.name for r in bundle.acceptance] == ["partition_ordering[p=0.1]", "partition_ordering[p=0.3]"]
    for row in bundle.rows:
        assert 0.0 <= row["delta_spv"] <= 1.0
        assert 0.0 <= row["delta_hfn"] <= 1.0


def test_latency_divergence_rows():
    bundle = _run("latency_divergence", sweep={"latencies": [1, 3]}, **SMALL_NETWORK)
    assert [r["latency"] for r in bundle.rows] == [1, 3, 1, 3]
    assert "p_value_high_vs_low" in bundle.aggregates


def test_policy_divergence_rows():
    bundle = _run(
        "policy_divergence",
        topology={"n": 30, "k": 4, "lat_max": 1},
        policy={"drift_rate": 0.1, "horizon": 60, "mismatch_replications": 200},
        sweep={"redundant_counts": [0, 10]},
    )
    assert [r["redundant"] for r in bundle.rows] == [0, 10, 0, 10]
    assert all(r["bound"] == 0.0 for r in bundle.rows if r["redundant"] == 0)


def test_policy_divergence_rejects_oversized_redundant_set():
    from app.exceptions import ConfigError

    with pytest.raises(ConfigError):
        _run("policy_divergence", replications=1, topology={"n": 10, "k": 4}, sweep={"redundant_counts": [8]},
             policy={"horizon": 5, "mismatch_replications": 10})


def test_reorg_decay_rows():
    bundle = _run("reorg_decay", replications=1, sweep={"q_values": [0.3], "depths": [1, 2, 3], "races": 2000})
    assert [r["delta_h"] for r in bundle.rows] == [1, 2, 3]
    entry = bundle.aggregates["0.3"]
    assert entry["races"] == [2000, 2000, 2000]
    assert entry["analytic"][0] == pytest.approx(0.6)


def test_surplus_with_trace_accounting():
    bundle = _run(
        "surplus",
        adversary={"alpha": 0.3, "invalid_injection_rate": 1.0},
        surplus={"samples": 2000, "trace_accounting": True},
        **SMALL_NETWORK,
    )
    assert bundle.passed
    assert {"trace_txs", "hfn_reject_latency", "spv_confirm_latency"} <= set(bundle.columns)

    config = parse_experiment_config(bundle.config)
    traces = []
    for seed in (11, 12):
        graph = build_graph(config.topology, seed)
        traces.append(run_simulation(build_sim_config(config, graph, seed)))
    expected = decision_latency_excess(traces)
    latency = bundle.aggregates["trace"]["decision_latency"]
    assert latency["hfn_samples"] == expected.hfn_samples
    assert latency["spv_samples"] == expected.spv_samples
    if expected.hfn_samples:
        assert latency["hfn_reject_latency"] == pytest.approx(expected.hfn_reject_latency)
        assert latency["hfn_reject_latency"] >= 1.0
    if expected.excess is not None:
        assert latency["excess"] == pytest.approx(expected.excess)

    transactions = bundle.aggregates["trace"]["transactions"]
    totals = {cls.value: 0 for cls in TxClass}
    for trace in traces:
        for cls, count in classify_trace_transactions(trace).items():
            totals[cls.value] += count
    assert transactions == totals
    assert transactions["T3_malformed"] > 0


def test_surplus_without_trace_accounting_has_no_trace_summary():
    bundle = _run("surplus", replications=1, surplus={"samples": 500})
    assert "trace" not in bundle.aggregates
    assert "trace_txs" not in bundle.columns
