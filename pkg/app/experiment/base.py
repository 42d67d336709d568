from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, ClassVar, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from app.experiment.config import AcceptanceSettings, ExperimentConfig
from app.schema import ExperimentKind

Row = Dict[str, Any]


class CriterionResult(BaseModel):
    """Verdict of one acceptance criterion"""

    name: str
    passed: bool
    measured: str = Field(..., description="What the bundle shows")
    expected: str = Field(..., description="What the criterion demands")

    def __bool__(self):
        return self.passed

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict} {self.name}: measured {self.measured}; expected {self.expected}"


class BaseExperiment(BaseModel, ABC):
    """One experiment kind: per-replication rows, pure aggregates, criteria"""

    kind: ClassVar[ExperimentKind]
    criteria: ClassVar[List[str]] = []

    config: ExperimentConfig

    class Config:
        arbitrary_types_allowed = True

    @abstractmethod
    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        """Rows for one replication; every row carries ``replication`` and ``seed``."""

    @abstractmethod
    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        """Aggregates computed from rows alone."""

    @abstractmethod
    def evaluate(
        self, rows: List[Row], summary: Dict[str, Any], acceptance: AcceptanceSettings
    ) -> List[CriterionResult]:
        """Criterion verdicts for this kind."""

    def base_row(self, index: int, seed: int, **values) -> Row:
        # numpy scalars become plain Python values so rows read back unchanged
        plain = {k: v.item() if isinstance(v, np.generic) else v for k, v in values.items()}
        return {"replication": index, "seed": seed, **plain}
