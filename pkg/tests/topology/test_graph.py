import pytest

from app.exceptions import InvalidParameterError, UnknownNodeError
from app.schema import NodeRole
from app.topology.graph import Edge, NetworkGraph, NodeClass
from tests.helpers import make_graph


def test_edge_of_orders_endpoints():
    edge = Edge.of(5, 2, latency=3)
    assert edge.key == (2, 5)
    assert edge.latency == 3


def test_edge_rejects_self_loop_and_zero_latency():
    with pytest.raises(ValueError):
        Edge.of(1, 1)
    with pytest.raises(ValueError):
        Edge.of(0, 1, latency=0)


def test_only_miners_carry_hashrate():
    with pytest.raises(ValueError):
        NodeClass(role=NodeRole.SPV, hashrate_share=0.5)
    assert NodeClass.miner(0.25).hashrate_share == 0.25


def test_roles_default_to_home_nodes(path4):
    assert all(path4.role(i) == NodeRole.HFN for i in path4.nodes)


def test_graph_rejects_duplicate_and_out_of_range_edges():
    with pytest.raises(ValueError):
        NetworkGraph(node_count=3, edges=[Edge.of(0, 1), Edge.of(1, 0)])
    with pytest.raises(ValueError):
        NetworkGraph(node_count=3, edges=[Edge.of(0, 3)])


def test_miner_shares_must_sum_to_one():
    with pytest.raises(ValueError):
        make_graph(3, [(0, 1), (1, 2)], roles={0: NodeClass.miner(0.5), 1: NodeClass.miner(0.4)})
    graph = make_graph(3, [(0, 1), (1, 2)], roles={0: NodeClass.miner(0.5), 1: NodeClass.miner(0.5)})
    assert graph.hashrate_shares() == {0: 0.5, 1: 0.5}
    assert graph.miners == [0, 1]


def test_adjacency_queries(path4):
    assert path4.neighbors(1) == [0, 2]
    assert path4.degree(0) == 1
    assert path4.has_edge(2, 3)
    assert not path4.has_edge(0, 3)
    assert path4.latency(1, 2) == 1
    with pytest.raises(InvalidParameterError):
        path4.latency(0, 3)
    with pytest.raises(UnknownNodeError):
        path4.neighbors(9)


def test_to_networkx_restricted_is_induced(path4):
    g = path4.to_networkx(restrict_to=[0, 1, 3])
    assert set(g.nodes) == {0, 1, 3}
    assert set(g.edges) == {(0, 1)}


def test_with_edges_keeps_roles(single_miner_line):
    grown = single_miner_line.with_edges(list(single_miner_line.edges) + [Edge.of(2, 3)])
    assert grown.has_edge(2, 3)
    assert grown.role(0) == NodeRole.MINER
    assert not single_miner_line.has_edge(2, 3)
