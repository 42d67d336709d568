from app.engine.config import SimConfig
from app.engine.export import trace_csv, trace_digest, write_trace_csv
from app.engine.metrics import (
    DivergenceDecomposition,
    compose_divergence,
    decompose_divergence,
    divergence_probability,
    global_chain_sequence,
    latency_divergence_curve,
    ledger_monotonicity_violations,
    pairwise_divergence_rate,
    unpeered_nodes,
    validation_surplus_set,
)
from app.engine.simulator import Simulator, run_simulation
from app.engine.trace import Adoption, MetricsFrame, Rejection, ReorgEvent, SimTrace

__all__ = [
    "SimConfig",
    "SimTrace",
    "MetricsFrame",
    "ReorgEvent",
    "Rejection",
    "Adoption",
    "Simulator",
    "run_simulation",
    "divergence_probability",
    "pairwise_divergence_rate",
    "validation_surplus_set",
    "latency_divergence_curve",
    "decompose_divergence",
    "compose_divergence",
    "DivergenceDecomposition",
    "unpeered_nodes",
    "global_chain_sequence",
    "ledger_monotonicity_violations",
    "trace_csv",
    "write_trace_csv",
    "trace_digest",
]
