from typing import Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx
from pydantic import BaseModel, Field, PrivateAttr, model_validator

from app.exceptions import InvalidParameterError, UnknownNodeError
from app.schema import NodeRole

SHARE_TOLERANCE = 1e-9


class Edge(BaseModel):
    """Undirected edge with a propagation latency in ticks"""

    u: int = Field(..., ge=0)
    v: int = Field(..., ge=0)
    latency: int = Field(1, ge=1, description="Ticks a message needs to cross the edge")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _ordered(self) -> "Edge":
        if self.u == self.v:
            raise ValueError(f"self-loop on node {self.u}")
        if self.u > self.v:
            raise ValueError(f"edge endpoints must be ordered, got ({self.u}, {self.v})")
        return self

    @classmethod
    def of(cls, a: int, b: int, latency: int = 1) -> "Edge":
        return cls(u=min(a, b), v=max(a, b), latency=latency)

    @property
    def key(self) -> Tuple[int, int]:
        return (self.u, self.v)


class NodeClass(BaseModel):
    """Role of a node; only miners carry hashrate"""

    role: NodeRole = NodeRole.HFN
    hashrate_share: float = Field(0.0, ge=0.0, le=1.0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _share_only_for_miners(self) -> "NodeClass":
        if self.role != NodeRole.MINER and self.hashrate_share != 0.0:
            raise ValueError(f"{self.role.value} node cannot carry hashrate")
        return self

    @classmethod
    def miner(cls, share: float) -> "NodeClass":
        return cls(role=NodeRole.MINER, hashrate_share=share)


HFN = NodeClass(role=NodeRole.HFN)
SPV = NodeClass(role=NodeRole.SPV)


class NetworkGraph(BaseModel):
    """The network G = (V, E, latency) with a total role map.

    Node ids are 0..node_count-1. ``k``, ``beta`` and ``seed`` describe how
    the graph was generated and only feed the text export header.
    """

    node_count: int = Field(..., ge=1)
    edges: List[Edge] = Field(default_factory=list)
    roles: Dict[int, NodeClass] = Field(default_factory=dict)
    k: int = Field(0, ge=0, description="Generator neighbour count")
    beta: float = Field(0.0, ge=0.0, le=1.0, description="Generator rewiring probability")
    seed: int = Field(0, description="Generator seed")

    _adjacency: Dict[int, Dict[int, int]] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check(self) -> "NetworkGraph":
        n = self.node_count
        if not self.roles:
            self.roles = {i: HFN for i in range(n)}
        if set(self.roles) != set(range(n)):
            raise ValueError("role map must cover exactly the node ids 0..n-1")
        seen: Set[Tuple[int, int]] = set()
        for edge in self.edges:
            if edge.v >= n:
                raise ValueError(f"edge {edge.key} references a node outside 0..{n - 1}")
            if edge.key in seen:
                raise ValueError(f"duplicate edge {edge.key}")
            seen.add(edge.key)
        shares = [c.hashrate_share for c in self.roles.values() if c.role == NodeRole.MINER]
        if shares and abs(sum(shares) - 1.0) > SHARE_TOLERANCE:
            raise ValueError(f"miner hashrate shares sum to {sum(shares)}, expected 1")
        return self

    def model_post_init(self, __context) -> None:
        adjacency: Dict[int, Dict[int, int]] = {i: {} for i in range(self.node_count)}
        for edge in self.edges:
            adjacency.setdefault(edge.u, {})[edge.v] = edge.latency
            adjacency.setdefault(edge.v, {})[edge.u] = edge.latency
        self._adjacency = adjacency

    def _require(self, node: int) -> None:
        if node not in self._adjacency:
            raise UnknownNodeError(node)

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def neighbors(self, node: int) -> List[int]:
        self._require(node)
        return sorted(self._adjacency[node])

    def degree(self, node: int) -> int:
        self._require(node)
        return len(self._adjacency[node])

    def has_edge(self, a: int, b: int) -> bool:
        self._require(a)
        self._require(b)
        return b in self._adjacency[a]

    def latency(self, a: int, b: int) -> int:
        self._require(a)
        if b not in self._adjacency[a]:
            raise InvalidParameterError(f"no edge between {a} and {b}")
        return self._adjacency[a][b]

    def role(self, node: int) -> NodeRole:
        self._require(node)
        return self.roles[node].role

    def nodes_with_role(self, role: NodeRole) -> List[int]:
        return [i for i in self.nodes if self.roles[i].role == role]

    @property
    def miners(self) -> List[int]:
        return self.nodes_with_role(NodeRole.MINER)

    def hashrate_shares(self) -> Dict[int, float]:
        return {i: self.roles[i].hashrate_share for i in self.miners}

    def to_networkx(self, restrict_to: Optional[Iterable[int]] = None) -> nx.Graph:
        """Hop graph (latency stored as an edge attribute), optionally induced."""
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((e.u, e.v, {"latency": e.latency}) for e in self.edges)
        if restrict_to is None:
            return g
        keep = set(restrict_to)
        for node in keep:
            self._require(node)
        return g.subgraph(keep).copy()

    def with_edges(
        self,
        edges: Iterable[Edge],
        roles: Optional[Dict[int, NodeClass]] = None,
        node_count: Optional[int] = None,
    ) -> "NetworkGraph":
        """Copy of this graph with a new edge set (and optionally roles / size)."""
        return NetworkGraph(
            node_count=self.node_count if node_count is None else node_count,
            edges=sorted(edges, key=lambda e: e.key),
            roles=dict(self.roles if roles is None else roles),
            k=self.k,
            beta=self.beta,
            seed=self.seed,
        )

    def with_roles(self, roles: Dict[int, NodeClass]) -> "NetworkGraph":
        return self.with_edges(self.edges, roles=roles)
