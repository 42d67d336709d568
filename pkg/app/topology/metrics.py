import math
from collections import Counter
from typing import Dict, Iterable, Optional, Set, Tuple

import networkx as nx

from app.exceptions import (
    AdjacencyError,
    DisconnectedGraphError,
    InvalidParameterError,
    UnknownNodeError,
)
from app.topology.graph import NetworkGraph


def _connected_view(graph: NetworkGraph, restrict_to: Optional[Iterable[int]]) -> nx.Graph:
    g = graph.to_networkx(restrict_to)
    if g.number_of_nodes() > 1 and not nx.is_connected(g):
        raise DisconnectedGraphError(list(nx.connected_components(g)))
    return g


def diameter(graph: NetworkGraph, restrict_to: Optional[Iterable[int]] = None) -> int:
    """Largest shortest-path hop distance over the (induced) graph."""
    g = _connected_view(graph, restrict_to)
    if g.number_of_nodes() <= 1:
        return 0
    return int(nx.diameter(g))


def effective_diameter(
    graph: NetworkGraph, epsilon: float, restrict_to: Optional[Iterable[int]] = None
) -> int:
    """Smallest k such that at least (1 - epsilon) of unordered pairs lie within k hops.

    epsilon = 0 is accepted and gives the diameter.
    """
    if not 0.0 <= epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in [0, 1), got {epsilon}")
    g = _connected_view(graph, restrict_to)
    histogram: Counter = Counter()
    for source, lengths in nx.all_pairs_shortest_path_length(g):
        for target, hops in lengths.items():
            if source < target:
                histogram[hops] += 1
    pairs = sum(histogram.values())
    if pairs == 0:
        return 0
    needed = math.ceil((1.0 - epsilon) * pairs - 1e-9)
    covered = 0
    for hops in sorted(histogram):
        covered += histogram[hops]
        if covered >= needed:
            return hops
    return max(histogram)


def _local_connectivity(g: nx.Graph, s: int, t: int, removed: Set[int]) -> int:
    view = g.subgraph(set(g) - removed)
    if not nx.has_path(view, s, t):
        return 0
    return nx.node_connectivity(view, s, t)


def min_vertex_cut(graph: NetworkGraph, s: int, t: int) -> Set[int]:
    """Lexicographically smallest minimum vertex set separating s from t.

    Each cut element is the smallest remaining vertex whose removal lowers the
    s-t connectivity by exactly one, so the result is reproducible. Nodes in
    different components give the empty set.
    """
    for node in (s, t):
        if node not in graph.roles:
            raise UnknownNodeError(node)
    if s == t:
        raise InvalidParameterError(f"s and t must differ, got {s} twice")
    if graph.has_edge(s, t):
        raise AdjacencyError(s, t)

    g = graph.to_networkx()
    target = _local_connectivity(g, s, t, set())
    cut: Set[int] = set()
    last = -1
    candidates = sorted(set(g) - {s, t})
    while len(cut) < target:
        for v in candidates:
            if v <= last:
                continue
            if _local_connectivity(g, s, t, cut | {v}) == target - len(cut) - 1:
                cut.add(v)
                last = v
                break
        else:
            raise RuntimeError(f"no cut vertex found between {s} and {t}")
    return cut


def clustering_coefficient(
    graph: NetworkGraph, restrict_to: Optional[Iterable[int]] = None
) -> float:
    """Average clustering; nodes with degree < 2 count as 0."""
    g = graph.to_networkx(restrict_to)
    if g.number_of_nodes() == 0:
        return 0.0
    return float(nx.average_clustering(g))


def miner_pair_cuts(graph: NetworkGraph) -> Dict[Tuple[int, int], int]:
    """Minimum s-t vertex cut size for every non-adjacent miner pair."""
    g = graph.to_networkx()
    miners = graph.miners
    cuts: Dict[Tuple[int, int], int] = {}
    for i, s in enumerate(miners):
        for t in miners[i + 1 :]:
            if g.has_edge(s, t):
                continue
            cuts[(s, t)] = _local_connectivity(g, s, t, set())
    return cuts
