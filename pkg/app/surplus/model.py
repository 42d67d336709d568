import hashlib
import json
from typing import Dict

from pydantic import BaseModel, Field, model_validator

from app.schema import TxClass

COST_UNITS = "abstract cost units"


class CostModel(BaseModel):
    """Per-class validation cost, rejection utility, and invalidity rate"""

    c_home: Dict[TxClass, float] = Field(..., description="Home-node cost per transaction")
    c_reject: Dict[TxClass, float] = Field(..., description="Utility of rejecting an invalid transaction")
    invalid_probability: Dict[TxClass, float] = Field(..., description="Share of invalid transactions")

    model_config = {"extra": "forbid"}

    @model_validator(mode="after")
    def _check(self) -> "CostModel":
        for name in ("c_home", "c_reject", "invalid_probability"):
            table = getattr(self, name)
            missing = set(TxClass) - set(table)
            if missing:
                raise ValueError(f"{name} misses classes {sorted(c.value for c in missing)}")
            for cls, value in table.items():
                if value < 0:
                    raise ValueError(f"{name}[{cls.value}] must be >= 0, got {value}")
        for cls, p in self.invalid_probability.items():
            if p > 1:
                raise ValueError(f"invalid_probability[{cls.value}] must be <= 1, got {p}")
        return self

    def model_hash(self) -> str:
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def default_cost_model() -> CostModel:
    """Uniform unit cost; malformed transactions are almost always invalid."""
    return CostModel(
        c_home={cls: 1.0 for cls in TxClass},
        c_reject={cls: 1.0 for cls in TxClass},
        invalid_probability={
            TxClass.T1_STANDARD: 1e-5,
            TxClass.T2_METADATA: 1e-5,
            TxClass.T3_MALFORMED: 0.999,
            TxClass.T4_ORPHANED: 1e-5,
        },
    )
