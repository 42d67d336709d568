from typing import Iterable, List

from app.adversary.config import AdversaryConfig
from app.exceptions import InvalidParameterError, UnknownNodeError
from app.logger import logger
from app.rng import DELAY, PARTITION, make_rng
from app.topology.graph import Edge, NetworkGraph


def partition_edges(graph: NetworkGraph, p: float, seed: int) -> NetworkGraph:
    """Drop every edge independently with probability p (miner-core edges included)."""
    if not 0.0 <= p < 1.0:
        raise InvalidParameterError(f"partition probability must lie in [0, 1), got {p}")
    if p == 0.0:
        return graph
    edges = sorted(graph.edges, key=lambda e: e.key)
    keep = make_rng(seed, PARTITION).random(len(edges)) >= p
    return graph.with_edges(e for e, kept in zip(edges, keep) if kept)


def eclipse(graph: NetworkGraph, target: int, adversary_nodes: Iterable[int]) -> NetworkGraph:
    """Replace all of ``target``'s links by links to the adversary nodes only."""
    adversaries = sorted(set(adversary_nodes))
    for node in [target, *adversaries]:
        if node not in graph.roles:
            raise UnknownNodeError(node)
    if not adversaries:
        raise InvalidParameterError("eclipse needs at least one adversary node")
    if target in adversaries:
        raise InvalidParameterError(f"target {target} is itself an adversary node")

    if set(graph.neighbors(target)) == set(adversaries):
        return graph
    edges: List[Edge] = [e for e in graph.edges if target not in e.key]
    for adversary in adversaries:
        latency = graph.latency(target, adversary) if graph.has_edge(target, adversary) else 1
        edges.append(Edge.of(target, adversary, latency))
    return graph.with_edges(edges)


def apply_delay(
    graph: NetworkGraph, delayed_nodes: Iterable[int], delay_budget: int, seed: int
) -> NetworkGraph:
    """Add a uniform 0..delay_budget ticks to every edge touching the delayed set."""
    delayed = set(delayed_nodes)
    for node in delayed:
        if node not in graph.roles:
            raise UnknownNodeError(node)
    if delay_budget < 0:
        raise InvalidParameterError(f"delay budget must be >= 0, got {delay_budget}")
    if not delayed or delay_budget == 0:
        return graph
    edges = sorted(graph.edges, key=lambda e: e.key)
    extra = make_rng(seed, DELAY).integers(0, delay_budget + 1, size=len(edges))
    return graph.with_edges(
        Edge(u=e.u, v=e.v, latency=e.latency + int(x)) if (e.u in delayed or e.v in delayed) else e
        for e, x in zip(edges, extra)
    )


def prepare_network(graph: NetworkGraph, config: AdversaryConfig) -> NetworkGraph:
    """Partition, then eclipse each target, then delay."""
    prepared = partition_edges(graph, config.partition_probability, config.seed)
    for target in sorted(set(config.eclipse_targets)):
        prepared = eclipse(prepared, target, config.adversary_nodes)
    prepared = apply_delay(prepared, config.delayed_nodes, config.delay_budget, config.seed)
    removed = len(graph.edges) - len(prepared.edges)
    if removed > 0:
        logger.debug(f"Adversary setup removed {removed} of {len(graph.edges)} edges")
    return prepared
