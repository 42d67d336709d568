import csv
from collections import defaultdict, deque
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Union

import numpy as np
from scipy import sparse

from app.exceptions import InvalidParameterError
from app.policy.space import PolicyKernel, PolicySpace, PolicyVector
from app.rng import tick_draws
from app.schema import AdoptionRule
from app.topology.graph import NetworkGraph


def redundant_nodes(graph: NetworkGraph) -> List[int]:
    """Nodes with no links at all; their inbox is empty forever."""
    return [i for i in graph.nodes if graph.degree(i) == 0]


class PolicyDynamics:
    """Synchronous kernel stepping over a graph.

    At tick t node i sees, from every neighbour j, the policy j held at tick
    t - latency(i, j) (the initial policy before the run started). Nodes listed
    in ``advertised`` always show that fixed policy to their peers and never
    step themselves. Per-node draws for tick t are row i of
    ``tick_draws(seed, t, n)`` and are consumed in the same order as
    ``step_policy`` consumes a ``NodeDraws``, so the two agree node by node.
    """

    def __init__(
        self,
        graph: NetworkGraph,
        kernel: PolicyKernel,
        space: PolicySpace,
        seed: int,
        initial: Optional[Sequence[int]] = None,
        advertised: Optional[Dict[int, int]] = None,
    ):
        self.graph = graph
        self.kernel = kernel
        self.space = space
        self.seed = seed
        n = graph.node_count
        if initial is None:
            initial = [space.canonical_policy] * n
        self.current = np.asarray(initial, dtype=np.int64).copy()
        if self.current.shape != (n,):
            raise InvalidParameterError(f"initial policies must have length {n}")
        if np.any(self.current < 0) or np.any(self.current >= space.cardinality):
            raise InvalidParameterError("initial policies outside the policy space")

        self.advertised = dict(advertised or {})
        self._fixed = np.zeros(n, dtype=bool)
        for node, policy in self.advertised.items():
            self._fixed[node] = True
            self.current[node] = policy

        by_latency: Dict[int, List[tuple]] = defaultdict(list)
        for edge in graph.edges:
            by_latency[edge.latency].append((edge.u, edge.v))
        self._matrices = {}
        for latency, pairs in sorted(by_latency.items()):
            rows = [u for u, v in pairs] + [v for u, v in pairs]
            cols = [v for u, v in pairs] + [u for u, v in pairs]
            self._matrices[latency] = sparse.csr_matrix(
                (np.ones(len(rows)), (rows, cols)), shape=(n, n)
            )
        self.max_latency = max(by_latency, default=1)
        self._initial = self.current.copy()
        self._history: deque = deque(maxlen=self.max_latency)
        self.tick = 0

    def _seen_at(self, tick: int) -> np.ndarray:
        """Policies as advertised at ``tick`` (tick <= 0 is the initial vector)."""
        back = self.tick - tick
        if tick <= 0 or back >= len(self._history):
            return self._initial
        return self._history[-1 - back]

    def _inbox_counts(self, tick: int) -> np.ndarray:
        k = self.space.cardinality
        counts = np.zeros((self.graph.node_count, k))
        for latency, matrix in self._matrices.items():
            seen = self._seen_at(tick - latency)
            onehot = np.eye(k)[seen]
            counts += matrix @ onehot
        return np.rint(counts).astype(np.int64)

    def _quiet(self) -> bool:
        if self.kernel.drift_rate > 0.0:
            return False
        value = self.current[0]
        if np.any(self.current != value) or np.any(self._initial != value):
            return False
        return all(np.all(h == value) for h in self._history)

    def step(self) -> np.ndarray:
        """Advance one tick and return the new policy vector."""
        tick = self.tick + 1
        if self._quiet():
            new = self.current.copy()
        else:
            new = self._kernel_step(tick)
        self._history.append(new)
        self.current = new
        self.tick = tick
        return new

    def _kernel_step(self, tick: int) -> np.ndarray:
        n = self.graph.node_count
        k = self.space.cardinality
        counts = self._inbox_counts(tick)
        degree = counts.sum(axis=1)
        has_inbox = degree > 0
        draws = tick_draws(self.seed, tick, n)

        new = self.current.copy()
        used = np.zeros(n, dtype=np.int64)
        if self.kernel.adoption_rule == AdoptionRule.MAJORITY_OF_INBOX:
            new[has_inbox] = np.argmax(counts[has_inbox], axis=1)
        else:
            safe_degree = np.maximum(degree, 1)
            pick = np.minimum((draws[:, 0] * safe_degree).astype(np.int64), safe_degree - 1)
            chosen = (np.cumsum(counts, axis=1) <= pick[:, None]).sum(axis=1)
            new[has_inbox] = chosen[has_inbox]
            used[has_inbox] = 1

        if self.kernel.drift_rate > 0.0:
            rows = np.arange(n)
            drift = draws[rows, used] < self.kernel.drift_rate
            jump = np.minimum((draws[rows, used + 1] * k).astype(np.int64), k - 1)
            new = np.where(drift, jump, new)

        new[self._fixed] = self.current[self._fixed]
        return new

    def run(self, ticks: int) -> List[np.ndarray]:
        return [self.step() for _ in range(ticks)]

    def vector(self) -> PolicyVector:
        return PolicyVector(states={i: int(p) for i, p in enumerate(self.current)}, tick=self.tick)


def write_policy_trajectories(
    path: Union[str, Path],
    trajectories: Iterable[Sequence[int]],
    redundant: Set[int],
    header: Optional[str] = None,
) -> Path:
    """CSV with columns tick, node_id, policy, is_redundant (row t is tick t)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        if header:
            fh.write(f"# {header}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tick", "node_id", "policy", "is_redundant"])
        for tick, states in enumerate(trajectories):
            for node, policy in enumerate(states):
                writer.writerow([tick, node, int(policy), int(node in redundant)])
    return path
