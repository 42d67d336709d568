from typing import Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from app.engine.config import SimConfig
from app.engine.simulator import run_simulation
from app.engine.trace import SimTrace
from app.exceptions import DomainError, EmptyClassError, InvalidParameterError, WrongClassError
from app.schema import NodeRole

NodeFilter = Union[NodeRole, Iterable[int]]


def _members(trace: SimTrace, node_filter: NodeFilter) -> List[int]:
    if isinstance(node_filter, NodeRole):
        return trace.class_members(node_filter)
    return sorted(set(node_filter))


def divergence_probability(
    traces: Sequence[SimTrace], node_filter: NodeFilter, t: Optional[int] = None
) -> float:
    """Share of (trace, node) pairs with a divergent tip at tick t (horizon if None)."""
    if not traces:
        raise InvalidParameterError("divergence_probability needs at least one trace")
    diverged = 0
    total = 0
    for trace in traces:
        members = _members(trace, node_filter)
        if not members:
            continue
        deltas = trace.frame(t).deltas
        diverged += int(deltas[members].sum())
        total += len(members)
    return diverged / total if total else 0.0


def pairwise_divergence_rate(
    trace: SimTrace, class_a: NodeRole, class_b: NodeRole, t: Optional[int] = None
) -> float:
    """Mean tip disagreement over node pairs drawn from the two classes.

    Within one class the pairs are unordered and distinct.
    """
    a = trace.class_members(class_a)
    b = trace.class_members(class_b)
    if not a or not b:
        raise EmptyClassError(
            f"class {class_a.value if not a else class_b.value} has no members in this trace"
        )
    tips = trace.frame(t).tips
    if class_a == class_b:
        if len(a) < 2:
            return 0.0
        _, counts = np.unique(tips[a], return_counts=True)
        same = int(np.sum(counts * (counts - 1)))
        return 1.0 - same / (len(a) * (len(a) - 1))
    tips_a = tips[a]
    tips_b = tips[b]
    return float(np.mean(tips_a[:, None] != tips_b[None, :]))


def validation_surplus_set(trace: SimTrace, node: int) -> Set[int]:
    """Blocks a home node rejected for policy reasons that the global chain kept."""
    role = trace.roles.get(node)
    if role != NodeRole.HFN:
        raise WrongClassError(f"node {node} is {role.value if role else 'unknown'}, not a home node")
    final_path = set(trace.tree.path(trace.frame().global_tip))
    return {
        r.block_id
        for r in trace.rejections
        if r.node == node and r.policy_conflict and r.block_id in final_path
    }


def compose_divergence(epsilon: float, p_desync: float) -> float:
    """1 - (1 - epsilon)(1 - p_desync) for independent failure mechanisms."""
    for name, value in (("epsilon", epsilon), ("p_desync", p_desync)):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return 1.0 - (1.0 - epsilon) * (1.0 - p_desync)


class DivergenceDecomposition(BaseModel):
    """Measured divergence split into local-rule and desynchronisation parts"""

    samples: int
    epsilon: float = Field(..., description="Share of nodes rejecting a block of the global chain")
    p_desync: float = Field(..., description="Divergence share among nodes without such a rejection")
    p_delta: float = Field(..., description="Measured divergence share")
    composed: float = Field(..., description="compose_divergence(epsilon, p_desync)")


def decompose_divergence(
    traces: Sequence[SimTrace], node_filter: NodeFilter = NodeRole.HFN
) -> DivergenceDecomposition:
    """Split horizon divergence into rule divergence and desync; independence is not assumed."""
    if not traces:
        raise InvalidParameterError("decompose_divergence needs at least one trace")
    samples = rule = diverged = desync = 0
    for trace in traces:
        frame = trace.frame()
        global_path = set(trace.tree.path(frame.global_tip))
        for node in _members(trace, node_filter):
            samples += 1
            delta = bool(frame.deltas[node])
            diverged += delta
            if trace.final_rejected.get(node, set()) & global_path:
                rule += 1
            elif delta:
                desync += 1
    if samples == 0:
        raise EmptyClassError("no nodes match the filter")
    epsilon = rule / samples
    p_desync = desync / (samples - rule) if samples > rule else 0.0
    return DivergenceDecomposition(
        samples=samples,
        epsilon=epsilon,
        p_desync=p_desync,
        p_delta=diverged / samples,
        composed=compose_divergence(epsilon, p_desync),
    )


def _non_miner_latency(config: SimConfig) -> int:
    graph = config.graph
    latencies = [
        e.latency
        for e in graph.edges
        if not (graph.role(e.u) == NodeRole.MINER and graph.role(e.v) == NodeRole.MINER)
    ]
    return max(latencies, default=1)


def unpeered_nodes(trace: SimTrace) -> List[int]:
    """Honest non-miners without any miner neighbour."""
    return sorted(
        node
        for node, role in trace.roles.items()
        if role != NodeRole.MINER
        and node not in trace.adversary_nodes
        and node not in trace.miner_peered
    )


def latency_divergence_curve(
    configs: Sequence[SimConfig], replications: int
) -> List[Tuple[int, float]]:
    """Horizon divergence of nodes without miner peers, per latency setting.

    Replication r of a config runs with seed ``config.seed + r``.
    """
    if replications < 1:
        raise InvalidParameterError(f"replications must be >= 1, got {replications}")
    curve = []
    for config in configs:
        traces = [
            run_simulation(config.model_copy(update={"seed": config.seed + r}))
            for r in range(replications)
        ]
        diverged = total = 0
        for trace in traces:
            nodes = unpeered_nodes(trace)
            diverged += int(trace.frame().deltas[nodes].sum()) if nodes else 0
            total += len(nodes)
        curve.append((_non_miner_latency(config), diverged / total if total else 0.0))
    return curve


def global_chain_sequence(trace: SimTrace, t: Optional[int] = None) -> List[int]:
    return trace.tree.path(trace.frame(t).global_tip)


def ledger_monotonicity_violations(trace: SimTrace) -> List[str]:
    """Global-chain changes that are neither extensions nor logged reorgs,
    plus global-chain blocks not produced by a miner."""
    problems = []
    reorg_ticks = {e.tick for e in trace.reorg_events}
    for prev, cur in zip(trace.frames, trace.frames[1:]):
        if prev.global_tip == cur.global_tip:
            continue
        if not trace.tree.is_ancestor(prev.global_tip, cur.global_tip) and cur.tick not in reorg_ticks:
            problems.append(f"tick {cur.tick}: unlogged switch {prev.global_tip} -> {cur.global_tip}")
    for block_id in global_chain_sequence(trace):
        block = trace.tree[block_id]
        if block.is_genesis:
            continue
        if trace.roles.get(block.producer) != NodeRole.MINER:
            problems.append(f"block {block_id} produced by non-miner {block.producer}")
    return problems
