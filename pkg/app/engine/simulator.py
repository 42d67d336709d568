from collections import defaultdict
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from app.adversary.actions import prepare_network
from app.adversary.config import FaultRecord
from app.adversary.faults import evaluate_fault_records
from app.engine.config import SimConfig
from app.engine.trace import Adoption, MetricsFrame, Rejection, ReorgEvent, SimTrace
from app.ledger.block import GENESIS_ID, Block, BlockTree, ChainView
from app.ledger.fork_choice import select_best_tip, tip_key
from app.logger import logger
from app.policy.divergence import divergence_metric
from app.policy.dynamics import PolicyDynamics
from app.policy.entropy import empirical_entropy
from app.rng import INITIAL_POLICY, PRODUCTION, make_rng
from app.schema import MessageKind, NodeRole, TxClass

METADATA_SHARE = 10


def within_class_disagreement(tips: np.ndarray, members: np.ndarray) -> float:
    """Share of unordered member pairs whose tips differ."""
    m = members.size
    if m < 2:
        return 0.0
    _, counts = np.unique(tips[members], return_counts=True)
    same = int(np.sum(counts.astype(np.int64) * (counts - 1)))
    return 1.0 - same / (m * (m - 1))


class Simulator:
    """One deterministic run of the network.

    Per tick: deliver due messages, finish due home-node validations, maybe
    produce one block, advance policies, then snapshot metrics. A message
    sent at tick t over an edge of latency L is handled at tick t + L.
    """

    def __init__(self, config: SimConfig, config_hash: str = ""):
        self.config = config
        self.config_hash = config_hash
        adv = config.adversary
        self.graph = prepare_network(config.graph, adv)
        graph = self.graph
        n = graph.node_count
        self.n = n
        self.roles: Dict[int, NodeRole] = {i: graph.role(i) for i in range(n)}
        self.neighbors: Dict[int, List[Tuple[int, int]]] = {
            i: [(j, graph.latency(i, j)) for j in graph.neighbors(i)] for i in range(n)
        }

        self.adv_miner: Optional[int] = config.adversary_miner if adv.active else None
        self.adversaries: Set[int] = set(adv.adversary_nodes)
        if self.adv_miner is not None:
            self.adversaries.add(self.adv_miner)
        self.honest_miners = [m for m in graph.miners if m not in self.adversaries]
        shares = np.array([graph.roles[m].hashrate_share for m in self.honest_miners])
        self._share_cdf = np.cumsum(shares) / shares.sum() if shares.size else shares
        self._honest_miner_set = set(self.honest_miners)
        self._has_miner_peer = {
            i: any(self.roles[j] == NodeRole.MINER for j, _ in self.neighbors[i]) for i in range(n)
        }

        self.tree = BlockTree(genesis_policy=config.space.canonical_policy)
        self.tips = np.zeros(n, dtype=np.int64)
        self.known: List[Dict[int, int]] = [{GENESIS_ID: 0} for _ in range(n)]
        self.validated: List[Set[int]] = [{GENESIS_ID} for _ in range(n)]
        self.relay_pending: Dict[int, List[Tuple[int, int, int, bool]]] = defaultdict(list)
        self.queue: Dict[int, List[Tuple[int, int, int]]] = defaultdict(list)
        self.rejected: List[Set[int]] = [set() for _ in range(n)]
        self._rejection_logged: Set[Tuple[int, int]] = set()

        self.honest_first_seen: Dict[int, int] = {GENESIS_ID: 0}
        self.global_tip = GENESIS_ID
        self._global_key = tip_key(self.tree.path_work(GENESIS_ID), 0, GENESIS_ID)
        self.private_tip: Optional[int] = None

        self.fault_records: List[FaultRecord] = []
        self.reorg_events: List[ReorgEvent] = []
        self.rejections: List[Rejection] = []
        self.adoptions: List[Adoption] = []
        self.frames: List[MetricsFrame] = []

        self.policies = PolicyDynamics(
            graph,
            config.kernel,
            config.space,
            config.seed,
            initial=self._initial_policies(),
            advertised=self._advertised(),
        )
        self._production = make_rng(config.seed, PRODUCTION).random((config.ticks + 1, 4))

        honest = np.array([i for i in range(n) if i not in self.adversaries], dtype=np.int64)
        self._honest = honest
        self._spv = np.array(
            [i for i in honest if self.roles[i] == NodeRole.SPV], dtype=np.int64
        )
        self._hfn = np.array(
            [i for i in honest if self.roles[i] == NodeRole.HFN], dtype=np.int64
        )
        self.redundant = {i for i in range(n) if not self.neighbors[i]}
        self._redundant_arr = np.array(sorted(self.redundant), dtype=np.int64)

    def _initial_policies(self) -> np.ndarray:
        space = self.config.space
        canonical = np.full(self.n, space.canonical_policy, dtype=np.int64)
        share = self.config.initial_policy_mismatch
        if share == 0.0:
            return canonical
        rng = make_rng(self.config.seed, INITIAL_POLICY)
        off = rng.random(self.n) < share
        shift = rng.integers(1, space.cardinality, size=self.n)
        return np.where(off, (canonical + shift) % space.cardinality, canonical)

    def _advertised(self) -> Dict[int, int]:
        policy = self.config.adversary.adversary_policy
        if policy is None:
            policy = self.config.space.canonical_policy
        return {a: policy for a in sorted(self.adversaries)}

    # messaging

    def _send(self, sender: int, block_id: int, tick: int, exclude: Optional[int] = None) -> None:
        for j, latency in self.neighbors[sender]:
            if j != exclude:
                self.queue[tick + latency].append((sender, j, block_id))

    def _learn(self, node: int, block_id: int, tick: int) -> List[int]:
        """Mark the block and any unknown ancestors as seen; returns them root-first."""
        known = self.known[node]
        new = []
        current: Optional[int] = block_id
        while current is not None and current not in known:
            new.append(current)
            current = self.tree[current].parent_id
        new.reverse()
        for b in new:
            known[b] = tick
        return new

    def _note_honest(self, blocks: List[int], tick: int) -> None:
        for b in blocks:
            if b in self.honest_first_seen:
                continue
            self.honest_first_seen[b] = tick
            if self.tree.chain_valid(b):
                key = tip_key(self.tree.path_work(b), tick, b)
                if key > self._global_key:
                    self._global_key = key
                    self.global_tip = b

    def _view(self, node: int, block_id: int) -> ChainView:
        return ChainView(
            tip=block_id,
            cumulative_work=self.tree.path_work(block_id),
            first_seen_tick={block_id: self.known[node][block_id]},
        )

    def _set_tip(self, node: int, block_id: int, tick: int) -> None:
        if self.tips[node] != block_id:
            self.tips[node] = block_id
            self.adoptions.append(Adoption(tick=tick, node=node, block_id=block_id))

    def _adopt_if_better(self, node: int, block_id: int, tick: int) -> None:
        best = select_best_tip([self._view(node, int(self.tips[node])), self._view(node, block_id)])
        self._set_tip(node, best.tip, tick)

    # per-class receive rules

    def _receive(self, tick: int, sender: int, node: int, block_id: int) -> None:
        if node in self.adversaries:
            return
        role = self.roles[node]
        if role == NodeRole.SPV:
            if self._has_miner_peer[node] and self.roles[sender] != NodeRole.MINER:
                return
            if not self._learn(node, block_id, tick):
                return
            self._adopt_if_better(node, block_id, tick)
            if self.config.spv_relay:
                self._send(node, block_id, tick, exclude=sender)
        elif role == NodeRole.MINER:
            new = self._learn(node, block_id, tick)
            if not new:
                return
            self._note_honest(new, tick)
            if self.tree.chain_valid(block_id):
                self._adopt_if_better(node, block_id, tick)
                self._send(node, block_id, tick, exclude=sender)
        else:
            new = self._learn(node, block_id, tick)
            due = tick + self.config.hfn_validation_delay
            for b in new:
                self.relay_pending[due].append((node, b, sender, b == block_id))

    def _verdict(self, node: int, block_id: int) -> bool:
        block = self.tree[block_id]
        ok = block.consensus_valid and block.policy_tag == self.policies.current[node]
        return (not ok) if self.config.invert_local_verdicts else ok

    def _validate_due(self, tick: int) -> None:
        due = self.relay_pending.pop(tick, [])
        if not due:
            return
        touched: Set[int] = set()
        for node, b, sender, relay in sorted(due, key=lambda d: (self.tree[d[1]].height, d[0], d[1])):
            self.validated[node].add(b)
            touched.add(node)
            verdict = self._verdict(node, b)
            if relay and self.tree.chain_valid(b) and (self.config.hfn_relay_rejected or verdict):
                self._send(node, b, tick, exclude=sender)
        for node in sorted(touched):
            self._reselect_hfn(node, tick)

    def _reselect_hfn(self, node: int, tick: int) -> None:
        """Best block whose whole path this home node accepts."""
        acceptable = {GENESIS_ID}
        rejected = set()
        for b in sorted(self.validated[node], key=lambda x: (self.tree[x].height, x)):
            if b == GENESIS_ID:
                continue
            verdict = self._verdict(node, b)
            if not verdict:
                rejected.add(b)
                if (node, b) not in self._rejection_logged:
                    self._rejection_logged.add((node, b))
                    self.rejections.append(
                        Rejection(
                            tick=tick,
                            node=node,
                            block_id=b,
                            policy_conflict=self.tree[b].consensus_valid,
                        )
                    )
            if verdict and self.tree[b].parent_id in acceptable:
                acceptable.add(b)
        self.rejected[node] = rejected
        best = select_best_tip([self._view(node, b) for b in sorted(acceptable)])
        self._set_tip(node, best.tip, tick)

    # production

    def _tx_counts(self, valid: bool) -> Dict[TxClass, int]:
        total = self.config.txs_per_block
        if not valid:
            return {TxClass.T3_MALFORMED: total}
        metadata = total // METADATA_SHARE
        return {TxClass.T1_STANDARD: total - metadata, TxClass.T2_METADATA: metadata}

    def _new_block(self, parent: int, producer: int, policy: int, valid: bool, tick: int) -> int:
        block = Block(
            block_id=self.tree.next_id(),
            parent_id=parent,
            height=self.tree[parent].height + 1,
            producer=producer,
            consensus_valid=valid,
            policy_tag=int(policy),
            tx_class_counts=self._tx_counts(valid),
            tick=tick,
        )
        return self.tree.add(block).block_id

    def _produce(self, tick: int) -> None:
        cfg = self.config
        if cfg.block_rate == 0.0 or tick > cfg.ticks - cfg.quiet_tail:
            return
        draw = self._production[tick]
        if draw[0] >= cfg.block_rate:
            return
        if self.adv_miner is not None and draw[1] < cfg.adversary.alpha:
            self._produce_adversarial(tick, draw[3])
            return
        idx = int(np.searchsorted(self._share_cdf, draw[2], side="right"))
        miner = self.honest_miners[min(idx, len(self.honest_miners) - 1)]
        b = self._new_block(
            int(self.tips[miner]), miner, self.policies.current[miner], True, tick
        )
        self.known[miner][b] = tick
        self._note_honest([b], tick)
        self._set_tip(miner, b, tick)
        self._send(miner, b, tick)

    def _victim_sources(self) -> List[int]:
        nodes = sorted(self.config.adversary.adversary_nodes)
        return nodes if nodes else [self.adv_miner]

    def _feed(self, sources: List[int], block_id: int, tick: int, kind: MessageKind, victims_only: bool) -> None:
        recorded: Set[int] = set()
        for source in sources:
            for j, latency in self.neighbors[source]:
                if j in self.adversaries:
                    continue
                is_miner = self.roles[j] == NodeRole.MINER
                if victims_only and is_miner:
                    continue
                delivery = tick + latency
                self.queue[delivery].append((source, j, block_id))
                if not is_miner and j not in recorded and delivery <= self.config.ticks:
                    recorded.add(j)
                    self.fault_records.append(
                        FaultRecord(tick=delivery, target=j, message_kind=kind, block_id=block_id)
                    )

    def _produce_adversarial(self, tick: int, injection_draw: float) -> None:
        adv = self.config.adversary
        policy = self._advertised()[self.adv_miner]
        if injection_draw < adv.invalid_injection_rate:
            b = self._new_block(self.global_tip, self.adv_miner, policy, False, tick)
            self._feed(self._victim_sources(), b, tick, MessageKind.INVALID_BLOCK, True)
            return

        parent = self.private_tip if self.private_tip is not None else self.global_tip
        b = self._new_block(parent, self.adv_miner, policy, True, tick)
        if self.tree.path_work(b) > self.tree.path_work(self.global_tip):
            self.private_tip = None
            sources = [self.adv_miner, *sorted(adv.adversary_nodes)]
            self._feed(sources, b, tick, MessageKind.STALE_CHAIN, False)
        else:
            self.private_tip = b
            self._feed(self._victim_sources(), b, tick, MessageKind.FORGED_HEADER_SEQUENCE, True)

    def _maybe_abandon(self) -> None:
        if self.private_tip is None:
            return
        behind = self.tree[self.global_tip].height - self.tree[self.private_tip].height
        if behind >= self.config.adversary.give_up_depth:
            self.private_tip = None

    # metrics

    def _frame(self, tick: int) -> MetricsFrame:
        tips = self.tips.copy()
        policies = self.policies.current.copy()
        honest_policies = policies[self._honest] if self._honest.size else policies
        isolated = 0.0
        if self._redundant_arr.size:
            isolated = empirical_entropy(policies[self._redundant_arr], self.config.space.cardinality)
        return MetricsFrame(
            tick=tick,
            global_tip=self.global_tip,
            tips=tips,
            policies=policies,
            deltas=(tips != self.global_tip).astype(np.int8),
            divergence=divergence_metric(honest_policies),
            delta_spv=within_class_disagreement(tips, self._spv),
            delta_hfn=within_class_disagreement(tips, self._hfn),
            isolated_entropy=isolated,
        )

    def step(self, tick: int) -> None:
        previous_global = self.global_tip
        for sender, node, block_id in self.queue.pop(tick, []):
            self._receive(tick, sender, node, block_id)
        self._validate_due(tick)
        self._maybe_abandon()
        self._produce(tick)

        before = self.policies.current.copy()
        after = self.policies.step()
        changed = np.flatnonzero(before != after)
        for node in changed:
            if self.roles[int(node)] == NodeRole.HFN and int(node) not in self.adversaries:
                self._reselect_hfn(int(node), tick)

        if self.global_tip != previous_global and not self.tree.is_ancestor(
            previous_global, self.global_tip
        ):
            self.reorg_events.append(
                ReorgEvent(tick=tick, old_tip=previous_global, new_tip=self.global_tip)
            )
        self.frames.append(self._frame(tick))

    def run(self) -> SimTrace:
        cfg = self.config
        logger.debug(f"Simulating {self.n} nodes for {cfg.ticks} ticks (seed={cfg.seed})")
        self.frames.append(self._frame(0))
        for tick in range(1, cfg.ticks + 1):
            self.step(tick)

        trace = SimTrace(
            seed=cfg.seed,
            config_hash=self.config_hash,
            roles=self.roles,
            adversary_nodes=self.adversaries,
            redundant=self.redundant,
            miner_peered={
                i for i in range(self.n)
                if self.roles[i] != NodeRole.MINER and self._has_miner_peer[i]
            },
            hfn_validation_delay=cfg.hfn_validation_delay,
            frames=self.frames,
            tree=self.tree,
            fault_records=self.fault_records,
            reorg_events=self.reorg_events,
            rejections=self.rejections,
            adoptions=self.adoptions,
            final_views={
                i: self.tree.chain_view(int(self.tips[i]), self.known[i]) for i in range(self.n)
            },
            final_policies=self.policies.vector(),
            final_rejected={
                i: set(self.rejected[i]) for i in range(self.n) if self.roles[i] == NodeRole.HFN
            },
        )
        evaluate_fault_records(trace)
        logger.debug(
            f"Run seed={cfg.seed} done: {len(self.tree) - 1} blocks, "
            f"{len(self.reorg_events)} reorgs, {len(self.fault_records)} fault records"
        )
        return trace


def run_simulation(config: SimConfig, config_hash: str = "") -> SimTrace:
    return Simulator(config, config_hash).run()
