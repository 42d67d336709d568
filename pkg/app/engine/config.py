from typing import Optional

import networkx as nx
from pydantic import BaseModel, Field, model_validator

from app.adversary.config import AdversaryConfig
from app.policy.space import PolicyKernel, PolicySpace
from app.schema import NodeRole
from app.topology.graph import NetworkGraph


class SimConfig(BaseModel):
    """Everything one simulation run depends on"""

    graph: NetworkGraph
    ticks: int = Field(..., ge=1, description="Horizon in ticks")
    block_rate: float = Field(
        0.1, ge=0.0, le=1.0, description="Network-wide per-tick block probability"
    )
    kernel: PolicyKernel = Field(default_factory=PolicyKernel)
    space: PolicySpace = Field(default_factory=PolicySpace)
    adversary: AdversaryConfig = Field(default_factory=AdversaryConfig)
    seed: int = 0

    hfn_validation_delay: int = Field(0, ge=0, description="Ticks a home node spends validating")
    hfn_relay_rejected: bool = Field(True, description="Home nodes relay blocks they reject")
    spv_relay: bool = Field(False, description="SPV clients relay headers")
    invert_local_verdicts: bool = Field(False, description="Flip every home-node verdict")
    quiet_tail: int = Field(0, ge=0, description="Final ticks without block production")
    txs_per_block: int = Field(100, ge=0)
    initial_policy_mismatch: float = Field(
        0.0, ge=0.0, le=1.0, description="Share of nodes starting off the canonical policy"
    )

    class Config:
        arbitrary_types_allowed = True

    @model_validator(mode="after")
    def _check(self) -> "SimConfig":
        graph = self.graph
        if graph.node_count > 1 and not nx.is_connected(graph.to_networkx()):
            raise ValueError("graph must be connected before adversarial changes")
        if self.quiet_tail > self.ticks:
            raise ValueError("quiet_tail cannot exceed ticks")
        miners = graph.miners
        if not miners and self.block_rate > 0:
            raise ValueError("block production needs at least one miner")

        adv = self.adversary
        for node in [*adv.eclipse_targets, *adv.adversary_nodes, *adv.delayed_nodes]:
            if node not in graph.roles:
                raise ValueError(f"adversary config references unknown node {node}")
        if adv.adversary_policy is not None and adv.adversary_policy >= self.space.cardinality:
            raise ValueError("adversary_policy outside the policy space")
        if adv.miner_id is not None and graph.role(adv.miner_id) != NodeRole.MINER:
            raise ValueError(f"adversary miner_id {adv.miner_id} is not a miner")
        if adv.active and len(miners) < 2:
            raise ValueError("an active adversary needs at least two miners")
        controlled = set(adv.adversary_nodes)
        if adv.active:
            controlled.add(adv.miner_id if adv.miner_id is not None else miners[0])
        if self.block_rate > 0 and not set(miners) - controlled:
            raise ValueError("block production needs at least one miner outside the adversary")
        return self

    @property
    def adversary_miner(self) -> Optional[int]:
        if not self.adversary.active:
            return self.adversary.miner_id
        if self.adversary.miner_id is not None:
            return self.adversary.miner_id
        return self.graph.miners[0]
