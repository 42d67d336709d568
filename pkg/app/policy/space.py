from typing import Dict, Optional

from pydantic import BaseModel, Field, model_validator

from app.schema import AdoptionRule


class PolicySpace(BaseModel):
    """Finite policy space {0, ..., K-1} with a canonical policy"""

    cardinality: int = Field(4, ge=2, description="Number of policies K")
    canonical_policy: int = Field(0, ge=0, description="The canonical policy pi*")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _canonical_in_range(self) -> "PolicySpace":
        if self.canonical_policy >= self.cardinality:
            raise ValueError(
                f"canonical_policy {self.canonical_policy} outside 0..{self.cardinality - 1}"
            )
        return self


class PolicyKernel(BaseModel):
    """Adopt-then-drift update rule"""

    drift_rate: float = Field(0.0, ge=0.0, le=1.0, description="Per-tick mutation probability")
    adoption_rule: AdoptionRule = AdoptionRule.MAJORITY_OF_INBOX
    mismatch_p: Optional[float] = Field(
        None, ge=0.0, le=1.0, description="Cached stationary mismatch estimate"
    )

    model_config = {"frozen": True}

    @property
    def is_deterministic(self) -> bool:
        return self.drift_rate == 0.0 and self.adoption_rule == AdoptionRule.MAJORITY_OF_INBOX

    def with_mismatch(self, p: float) -> "PolicyKernel":
        return self.model_copy(update={"mismatch_p": p})


class PolicyVector(BaseModel):
    """Policy of every node at one tick"""

    states: Dict[int, int]
    tick: int = Field(0, ge=0)
