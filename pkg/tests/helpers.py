from app.topology.graph import HFN, Edge, NetworkGraph


def make_graph(node_count, pairs, roles=None, latency=1):
    """Graph from (u, v) or (u, v, latency) tuples; roles maps id -> NodeClass."""
    edges = [Edge.of(p[0], p[1], p[2] if len(p) == 3 else latency) for p in pairs]
    full_roles = {i: HFN for i in range(node_count)}
    full_roles.update(roles or {})
    return NetworkGraph(node_count=node_count, edges=edges, roles=full_roles)


def cycle_pairs(n):
    return [(i, (i + 1) % n) for i in range(n)]


def complete_pairs(nodes):
    nodes = list(nodes)
    return [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]]
