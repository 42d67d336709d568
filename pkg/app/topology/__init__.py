from app.topology.codec import dump_graph, load_graph, read_graph, write_graph
from app.topology.generator import (
    add_isolated,
    assign_roles,
    attach_peripheral,
    attach_to_miners,
    generate_watts_strogatz,
)
from app.topology.graph import HFN, SPV, Edge, NetworkGraph, NodeClass
from app.topology.metrics import (
    clustering_coefficient,
    diameter,
    effective_diameter,
    miner_pair_cuts,
    min_vertex_cut,
)

__all__ = [
    "Edge",
    "NodeClass",
    "NetworkGraph",
    "HFN",
    "SPV",
    "generate_watts_strogatz",
    "assign_roles",
    "attach_peripheral",
    "attach_to_miners",
    "add_isolated",
    "diameter",
    "effective_diameter",
    "min_vertex_cut",
    "clustering_coefficient",
    "miner_pair_cuts",
    "dump_graph",
    "load_graph",
    "write_graph",
    "read_graph",
]
