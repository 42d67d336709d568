import math
from typing import Dict, Iterable, List, Set, Tuple

import networkx as nx
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from app.exceptions import DisconnectedGraphError, InvalidParameterError, UnknownNodeError
from app.logger import logger
from app.rng import LATENCY, ROLES, TOPOLOGY, make_rng, sub_seed
from app.schema import NodeRole
from app.topology.graph import HFN, SPV, Edge, NetworkGraph, NodeClass

MAX_REWIRE_ATTEMPTS = 100
MINER_LATENCY = 1
DEFAULT_CORE_EXTRA_EDGES = 20


def _check_ws_parameters(n: int, k: int, beta: float) -> None:
    if k < 2 or k % 2 != 0:
        raise InvalidParameterError(f"k must be even and >= 2, got {k}")
    if k >= n:
        raise InvalidParameterError(f"k must be smaller than n, got k={k}, n={n}")
    if not 0.0 <= beta <= 1.0:
        raise InvalidParameterError(f"beta must lie in [0, 1], got {beta}")


def _check_latency_bounds(lat_min: int, lat_max: int) -> None:
    if lat_min < 1 or lat_max < lat_min:
        raise InvalidParameterError(
            f"latency bounds must satisfy 1 <= lat_min <= lat_max, got [{lat_min}, {lat_max}]"
        )


def _rewired_lattice(n: int, k: int, beta: float, seed: int) -> nx.Graph:
    g = nx.watts_strogatz_graph(n, k, beta, seed=seed)
    if not nx.is_connected(g):
        raise DisconnectedGraphError(list(nx.connected_components(g)))
    return g


def _log_retry(retry_state) -> None:
    logger.warning(
        f"Watts-Strogatz attempt {retry_state.attempt_number} came out disconnected, "
        "retrying with the next sub-seed"
    )


def generate_watts_strogatz(
    n: int,
    k: int,
    beta: float,
    seed: int,
    lat_min: int = 1,
    lat_max: int = 1,
) -> NetworkGraph:
    """Small-world graph with exactly n*k/2 edges, connected, latencies drawn per edge.

    Rewiring follows the standard construction: every clockwise lattice edge is
    rewired with probability ``beta`` to a uniformly chosen target that is
    neither the source nor an existing neighbour. Disconnected outcomes are
    retried with the next sub-seed.
    """
    _check_ws_parameters(n, k, beta)
    _check_latency_bounds(lat_min, lat_max)

    for attempt in Retrying(
        stop=stop_after_attempt(MAX_REWIRE_ATTEMPTS),
        retry=retry_if_exception_type(DisconnectedGraphError),
        before_sleep=_log_retry,
        reraise=True,
    ):
        with attempt:
            number = attempt.retry_state.attempt_number
            g = _rewired_lattice(n, k, beta, sub_seed(seed, TOPOLOGY, number - 1))

    rng = make_rng(seed, LATENCY)
    pairs = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    latencies = rng.integers(lat_min, lat_max + 1, size=len(pairs))
    edges = [Edge(u=u, v=v, latency=int(lat)) for (u, v), lat in zip(pairs, latencies)]
    return NetworkGraph(node_count=n, edges=edges, k=k, beta=float(beta), seed=seed)


def _components(members: List[int], edge_keys: Set[Tuple[int, int]]) -> List[Set[int]]:
    g = nx.Graph()
    g.add_nodes_from(members)
    g.add_edges_from(key for key in edge_keys if key[0] in g and key[1] in g)
    return [set(c) for c in nx.connected_components(g)]


def assign_roles(
    graph: NetworkGraph,
    miner_count: int,
    spv_fraction: float,
    core_extra_edges: int = DEFAULT_CORE_EXTRA_EDGES,
    seed: int = 0,
) -> NetworkGraph:
    """Pick miners, densify the miner core, then split the rest into SPV / HFN.

    Random latency-1 edges join miner components until the core is connected;
    ``core_extra_edges`` further random intra-miner edges follow, capped at the
    complete core. Every miner-miner edge ends up with latency 1. Miners share
    hashrate equally.
    """
    n = graph.node_count
    if miner_count < 1:
        raise InvalidParameterError(f"miner_count must be >= 1, got {miner_count}")
    if not 0.0 <= spv_fraction <= 1.0:
        raise InvalidParameterError(f"spv_fraction must lie in [0, 1], got {spv_fraction}")
    spv_count = math.ceil(spv_fraction * n)
    if miner_count + spv_count > n:
        raise InvalidParameterError(
            f"{miner_count} miners plus {spv_count} SPV clients exceed {n} nodes"
        )
    if core_extra_edges < 0:
        raise InvalidParameterError(f"core_extra_edges must be >= 0, got {core_extra_edges}")

    rng = make_rng(seed, ROLES)
    miners = sorted(int(i) for i in rng.choice(n, size=miner_count, replace=False))
    miner_set = set(miners)

    edges: Dict[Tuple[int, int], Edge] = {}
    for edge in graph.edges:
        if edge.u in miner_set and edge.v in miner_set:
            edge = Edge(u=edge.u, v=edge.v, latency=MINER_LATENCY)
        edges[edge.key] = edge

    components = _components(miners, set(edges))
    while len(components) > 1:
        candidates = [
            (a, b)
            for i, left in enumerate(components)
            for right in components[i + 1 :]
            for a in left
            for b in right
        ]
        candidates = sorted((min(a, b), max(a, b)) for a, b in candidates)
        a, b = candidates[int(rng.integers(len(candidates)))]
        edges[(a, b)] = Edge(u=a, v=b, latency=MINER_LATENCY)
        components = _components(miners, set(edges))

    free = [
        (a, b) for i, a in enumerate(miners) for b in miners[i + 1 :] if (a, b) not in edges
    ]
    extra = min(core_extra_edges, len(free))
    if extra:
        for idx in sorted(rng.choice(len(free), size=extra, replace=False)):
            a, b = free[int(idx)]
            edges[(a, b)] = Edge(u=a, v=b, latency=MINER_LATENCY)

    others = [i for i in range(n) if i not in miner_set]
    spv_nodes: Set[int] = set()
    if spv_count:
        spv_nodes = {others[int(i)] for i in rng.choice(len(others), size=spv_count, replace=False)}

    share = 1.0 / miner_count
    roles: Dict[int, NodeClass] = {}
    for i in range(n):
        if i in miner_set:
            roles[i] = NodeClass.miner(share)
        elif i in spv_nodes:
            roles[i] = SPV
        else:
            roles[i] = HFN
    logger.debug(
        f"Assigned {miner_count} miners, {len(spv_nodes)} SPV, "
        f"{n - miner_count - len(spv_nodes)} HFN on {n} nodes"
    )
    return graph.with_edges(edges.values(), roles=roles)


def attach_peripheral(
    graph: NetworkGraph, anchor: int, latency: int = 1, role: NodeRole = NodeRole.HFN
) -> NetworkGraph:
    """Append one degree-1 node connected to ``anchor``; its id is the old node_count."""
    if anchor not in graph.roles:
        raise UnknownNodeError(anchor)
    if role == NodeRole.MINER:
        raise InvalidParameterError("peripheral nodes cannot be miners")
    new_id = graph.node_count
    roles = dict(graph.roles)
    roles[new_id] = SPV if role == NodeRole.SPV else HFN
    edges = list(graph.edges) + [Edge.of(anchor, new_id, latency)]
    return graph.with_edges(edges, roles=roles, node_count=new_id + 1)


def attach_to_miners(graph: NetworkGraph, nodes: Iterable[int], seed: int) -> NetworkGraph:
    """Give every listed node without a miner peer a latency-1 edge to a random miner."""
    miners = graph.miners
    if not miners:
        raise InvalidParameterError("graph has no miners to attach to")
    rng = make_rng(seed, ROLES, 1)
    edges = {e.key: e for e in graph.edges}
    for node in sorted(set(nodes)):
        if node not in graph.roles:
            raise UnknownNodeError(node)
        if graph.role(node) == NodeRole.MINER:
            continue
        if any(graph.has_edge(node, m) for m in miners):
            continue
        miner = miners[int(rng.integers(len(miners)))]
        edge = Edge.of(node, miner, MINER_LATENCY)
        edges[edge.key] = edge
    return graph.with_edges(edges.values())


def add_isolated(graph: NetworkGraph, count: int) -> NetworkGraph:
    """Append ``count`` degree-0 home nodes (the redundant set)."""
    if count < 0:
        raise InvalidParameterError(f"count must be >= 0, got {count}")
    roles = dict(graph.roles)
    for i in range(graph.node_count, graph.node_count + count):
        roles[i] = HFN
    return graph.with_edges(graph.edges, roles=roles, node_count=graph.node_count + count)
