from typing import Dict, Type, Union

from app.exceptions import ConfigError
from app.experiment.base import BaseExperiment
from app.experiment.chain import FinalityMonotonicity, ReorgDecay
from app.experiment.config import ExperimentConfig
from app.experiment.divergence import (
    EnforcementInertness,
    LatencyDivergence,
    PartitionDivergence,
    SpvBaseline,
)
from app.experiment.game import Equilibrium
from app.experiment.policy import PolicyDivergence
from app.experiment.surplus import SurplusExperiment
from app.experiment.topology import TopologyClaims
from app.schema import ExperimentKind

EXPERIMENTS: Dict[ExperimentKind, Type[BaseExperiment]] = {
    cls.kind: cls
    for cls in (
        PartitionDivergence,
        ReorgDecay,
        PolicyDivergence,
        Equilibrium,
        SurplusExperiment,
        TopologyClaims,
        FinalityMonotonicity,
        SpvBaseline,
        EnforcementInertness,
        LatencyDivergence,
    )
}


class ExperimentFactory:
    """Factory mapping experiment kinds to their implementations"""

    @staticmethod
    def experiment_class(kind: Union[ExperimentKind, str]) -> Type[BaseExperiment]:
        try:
            return EXPERIMENTS[ExperimentKind(kind)]
        except (KeyError, ValueError):
            raise ConfigError(f"Unknown experiment kind: {kind}")

    @staticmethod
    def create(config: ExperimentConfig) -> BaseExperiment:
        return ExperimentFactory.experiment_class(config.kind)(config=config)
