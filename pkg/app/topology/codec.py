"""Line-oriented text form of a NetworkGraph.

::

    n k beta seed
    u v latency        (one line per edge)
    id role [hashrate] (one line per node)

Floats are written with ``repr`` so a dump/load cycle is bit-exact. Lines
starting with ``#`` are comments.
"""

from pathlib import Path
from typing import List, Union

from pydantic import ValidationError

from app.exceptions import GraphFormatError
from app.schema import ROLE_VALUES, NodeRole
from app.topology.graph import Edge, NetworkGraph, NodeClass


def dump_graph(graph: NetworkGraph) -> str:
    lines: List[str] = [f"{graph.node_count} {graph.k} {graph.beta!r} {graph.seed}"]
    for edge in sorted(graph.edges, key=lambda e: e.key):
        lines.append(f"{edge.u} {edge.v} {edge.latency}")
    for node in graph.nodes:
        cls = graph.roles[node]
        if cls.role == NodeRole.MINER:
            lines.append(f"{node} {cls.role.value} {cls.hashrate_share!r}")
        else:
            lines.append(f"{node} {cls.role.value}")
    return "\n".join(lines) + "\n"


def load_graph(text: str) -> NetworkGraph:
    rows = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows:
        raise GraphFormatError("empty graph text")

    number, header = rows[0]
    if len(header) != 4:
        raise GraphFormatError(f"line {number}: header must be 'n k beta seed'")
    try:
        n, k, beta, seed = int(header[0]), int(header[1]), float(header[2]), int(header[3])
    except ValueError as e:
        raise GraphFormatError(f"line {number}: bad header: {e}") from e

    edges: List[Edge] = []
    roles = {}
    try:
        for number, tokens in rows[1:]:
            if len(tokens) >= 2 and tokens[1] in ROLE_VALUES:
                node, role = int(tokens[0]), NodeRole(tokens[1])
                if node in roles:
                    raise GraphFormatError(f"line {number}: node {node} listed twice")
                if role == NodeRole.MINER:
                    if len(tokens) != 3:
                        raise GraphFormatError(f"line {number}: miner line needs a hashrate")
                    roles[node] = NodeClass.miner(float(tokens[2]))
                elif len(tokens) == 2:
                    roles[node] = NodeClass(role=role)
                else:
                    raise GraphFormatError(f"line {number}: only miners carry a hashrate")
            elif len(tokens) == 3:
                edges.append(Edge.of(int(tokens[0]), int(tokens[1]), int(tokens[2])))
            else:
                raise GraphFormatError(f"line {number}: cannot parse {' '.join(tokens)!r}")
        return NetworkGraph(node_count=n, edges=edges, roles=roles, k=k, beta=beta, seed=seed)
    except (ValueError, ValidationError) as e:
        if isinstance(e, GraphFormatError):
            raise
        raise GraphFormatError(f"invalid graph: {e}") from e


def write_graph(graph: NetworkGraph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_graph(graph), encoding="utf-8")
    return path


def read_graph(path: Union[str, Path]) -> NetworkGraph:
    return load_graph(Path(path).read_text(encoding="utf-8"))
