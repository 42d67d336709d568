from typing import Dict, List, Optional, Set

import numpy as np
from pydantic import BaseModel, Field

from app.adversary.config import FaultRecord
from app.ledger.block import BlockTree, ChainView
from app.policy.space import PolicyVector
from app.schema import NodeRole


class MetricsFrame(BaseModel):
    """Snapshot taken at the end of one tick"""

    tick: int
    global_tip: int
    tips: np.ndarray = Field(..., description="Local tip of every node")
    policies: np.ndarray = Field(..., description="Policy of every node")
    deltas: np.ndarray = Field(..., description="1 where a node's tip differs from the global tip")
    divergence: float = Field(..., ge=0.0, le=1.0, description="Policy divergence D")
    delta_spv: float = Field(0.0, description="Within-class tip disagreement of SPV clients")
    delta_hfn: float = Field(0.0, description="Within-class tip disagreement of home nodes")
    isolated_entropy: float = Field(0.0, description="Policy entropy (bits) over isolated nodes")

    class Config:
        arbitrary_types_allowed = True


class ReorgEvent(BaseModel):
    tick: int
    old_tip: int
    new_tip: int


class Rejection(BaseModel):
    """A home node refusing a block; ``policy_conflict`` is False for invalid blocks"""

    tick: int
    node: int
    block_id: int
    policy_conflict: bool


class Adoption(BaseModel):
    tick: int
    node: int
    block_id: int


class SimTrace(BaseModel):
    """Complete record of one run"""

    seed: int
    config_hash: str = ""
    roles: Dict[int, NodeRole]
    adversary_nodes: Set[int] = Field(default_factory=set)
    redundant: Set[int] = Field(default_factory=set)
    miner_peered: Set[int] = Field(default_factory=set, description="Non-miners with a miner peer")
    hfn_validation_delay: int = Field(0, ge=0)
    frames: List[MetricsFrame] = Field(default_factory=list)
    tree: BlockTree
    fault_records: List[FaultRecord] = Field(default_factory=list)
    reorg_events: List[ReorgEvent] = Field(default_factory=list)
    rejections: List[Rejection] = Field(default_factory=list)
    adoptions: List[Adoption] = Field(default_factory=list)
    final_views: Dict[int, ChainView] = Field(default_factory=dict)
    final_policies: Optional[PolicyVector] = None
    final_rejected: Dict[int, Set[int]] = Field(
        default_factory=dict, description="Blocks each home node rejects at the horizon"
    )

    class Config:
        arbitrary_types_allowed = True

    @property
    def horizon(self) -> int:
        return self.frames[-1].tick

    def frame(self, tick: Optional[int] = None) -> MetricsFrame:
        return self.frames[-1] if tick is None else self.frames[tick]

    def class_members(self, role: NodeRole) -> List[int]:
        """Nodes of a role, adversary-run nodes left out."""
        return sorted(
            node for node, r in self.roles.items() if r == role and node not in self.adversary_nodes
        )
