from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from app.schema import MessageKind


class AdversaryConfig(BaseModel):
    """What the adversary controls for one run"""

    alpha: float = Field(0.0, ge=0.0, lt=0.5, description="Fraction of total hashrate")
    delay_budget: int = Field(0, ge=0, description="Max extra ticks on edges touching delayed_nodes")
    eclipse_targets: List[int] = Field(default_factory=list)
    partition_probability: float = Field(0.0, ge=0.0, lt=1.0, description="Per-edge removal probability")
    invalid_injection_rate: float = Field(
        0.0, ge=0.0, le=1.0, description="Probability an adversary block is consensus-invalid"
    )
    seed: int = Field(0, description="Seed for partition and delay draws")
    adversary_nodes: List[int] = Field(
        default_factory=list, description="Relay nodes run by the adversary; never relay honest blocks"
    )
    miner_id: Optional[int] = Field(
        None, description="Miner-role node the adversary mines as (lowest miner id when unset)"
    )
    delayed_nodes: List[int] = Field(default_factory=list, description="The delayed set D")
    give_up_depth: int = Field(6, ge=1, description="Private branch is dropped this far behind")
    adversary_policy: Optional[int] = Field(
        None, ge=0, description="Policy adversarial peers advertise"
    )
    min_honest_connectivity: Optional[int] = Field(
        None, ge=1, description="Documented k-connectivity of honest nodes; not enforced"
    )

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _targets(self) -> "AdversaryConfig":
        overlap = set(self.eclipse_targets) & set(self.adversary_nodes)
        if overlap:
            raise ValueError(f"eclipse targets cannot be adversary nodes: {sorted(overlap)}")
        if self.eclipse_targets and not self.adversary_nodes:
            raise ValueError("eclipse targets need at least one adversary node")
        return self

    @property
    def active(self) -> bool:
        return self.alpha > 0.0


class FaultRecord(BaseModel):
    """One adversarial message delivered toward a victim"""

    tick: int = Field(..., ge=0)
    target: int = Field(..., ge=0)
    message_kind: MessageKind
    block_id: Optional[int] = None
    caused_deviation: Optional[bool] = Field(
        None, description="Unset until evaluated against the completed trace"
    )
