import hashlib
import json
from pathlib import Path
from typing import List, Optional, Union

import tomli
from pydantic import BaseModel, Field, ValidationError, model_validator

from app.adversary.config import AdversaryConfig
from app.config import config as settings
from app.exceptions import ConfigError
from app.game.model import UtilityParams
from app.logger import logger
from app.schema import AdoptionRule, ExperimentKind
from app.surplus.model import CostModel


class Section(BaseModel):
    model_config = {"extra": "forbid"}


class ExperimentSection(Section):
    kind: ExperimentKind
    replications: int = Field(1, ge=1)
    base_seed: int = Field(0, description="Replication i runs with base_seed + i")
    name: Optional[str] = None


class TopologySettings(Section):
    n: int = Field(200, ge=3)
    k: int = Field(6, ge=2)
    beta: float = Field(0.1, ge=0.0, le=1.0)
    lat_min: int = Field(1, ge=1)
    lat_max: int = Field(3, ge=1)
    miner_count: int = Field(8, ge=1)
    spv_fraction: float = Field(0.3, ge=0.0, le=1.0)
    core_extra_edges: int = Field(20, ge=0)
    attach_spv_to_miners: bool = Field(True, description="Peer every SPV client with a miner")


class SimulationSettings(Section):
    ticks: int = Field(150, ge=1)
    block_rate: float = Field(0.1, ge=0.0, le=1.0)
    hfn_validation_delay: int = Field(1, ge=0)
    hfn_relay_rejected: bool = True
    spv_relay: bool = False
    quiet_tail: int = Field(0, ge=0)
    txs_per_block: int = Field(100, ge=0)
    initial_policy_mismatch: float = Field(0.0, ge=0.0, le=1.0)


class PolicySettings(Section):
    cardinality: int = Field(4, ge=2)
    canonical_policy: int = Field(0, ge=0)
    drift_rate: float = Field(0.0, ge=0.0, le=1.0)
    adoption_rule: AdoptionRule = AdoptionRule.MAJORITY_OF_INBOX
    horizon: int = Field(200, ge=1, description="Ticks for policy-only runs")
    mismatch_replications: int = Field(2000, ge=1)


class GameSettings(UtilityParams):
    nodes: int = Field(50, ge=1)
    miners: int = Field(5, ge=0)
    max_rounds: int = Field(10, ge=1)
    enumeration_max_nodes: int = Field(8, ge=1, le=10)
    sequential: bool = False

    def params(self) -> UtilityParams:
        return UtilityParams(**{name: getattr(self, name) for name in UtilityParams.model_fields})


class SurplusSettings(Section):
    samples: int = Field(10000, ge=1)
    cost_model: Optional[CostModel] = None
    trace_accounting: bool = Field(
        False, description="Also simulate the configured network and account its blocks by class"
    )


class SweepSettings(Section):
    partition_probabilities: List[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3])
    redundant_counts: List[int] = Field(default_factory=lambda: [0, 6, 12, 24])
    q_values: List[float] = Field(default_factory=lambda: [0.1, 0.2, 0.3])
    depths: List[int] = Field(default_factory=lambda: list(range(1, 11)))
    races: int = Field(100000, ge=1)
    latencies: List[int] = Field(default_factory=lambda: [1, 2, 4, 8])
    peripheral_nodes: int = Field(20, ge=0)
    effective_epsilon: float = Field(0.1, ge=0.0, lt=1.0)
    finality_q_values: List[float] = Field(
        default_factory=lambda: [round(0.05 * i, 2) for i in range(1, 10)]
    )
    finality_max_depth: int = Field(20, ge=1)


class AcceptanceSettings(Section):
    significance: float = Field(0.01, gt=0.0, lt=1.0, description="One-sided test level")
    bound_share: float = Field(0.95, ge=0.0, le=1.0)
    standard_errors: float = Field(3.0, gt=0.0)
    min_r_squared: float = Field(0.98, ge=0.0, le=1.0)
    min_fit_events: int = Field(10, ge=1)
    max_rounds: int = Field(2, ge=1)
    surplus_high: float = 0.999
    surplus_low: float = 0.01


# grids each kind needs to be non-empty
REQUIRED_GRIDS = {
    ExperimentKind.PARTITION_DIVERGENCE: ["partition_probabilities"],
    ExperimentKind.POLICY_DIVERGENCE: ["redundant_counts"],
    ExperimentKind.REORG_DECAY: ["q_values", "depths"],
    ExperimentKind.FINALITY_MONOTONICITY: ["finality_q_values"],
    ExperimentKind.LATENCY_DIVERGENCE: ["latencies"],
}


class ExperimentConfig(Section):
    """A full experiment file: one table per section"""

    experiment: ExperimentSection
    topology: TopologySettings = Field(default_factory=TopologySettings)
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    policy: PolicySettings = Field(default_factory=PolicySettings)
    adversary: AdversaryConfig = Field(default_factory=AdversaryConfig)
    game: GameSettings = Field(default_factory=GameSettings)
    surplus: SurplusSettings = Field(default_factory=SurplusSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    acceptance: AcceptanceSettings = Field(default_factory=AcceptanceSettings)

    @model_validator(mode="after")
    def _grids(self) -> "ExperimentConfig":
        for name in REQUIRED_GRIDS.get(self.experiment.kind, []):
            if not getattr(self.sweep, name):
                raise ValueError(f"sweep.{name} must not be empty for {self.experiment.kind.value}")
        if self.topology.lat_max < self.topology.lat_min:
            raise ValueError("topology.lat_max must be >= topology.lat_min")
        if self.policy.canonical_policy >= self.policy.cardinality:
            raise ValueError("policy.canonical_policy outside the policy space")
        return self

    @property
    def kind(self) -> ExperimentKind:
        return self.experiment.kind

    def with_seed(self, seed: int) -> "ExperimentConfig":
        data = self.model_dump()
        data["experiment"]["base_seed"] = seed
        return ExperimentConfig.model_validate(data)


def config_hash(config: BaseModel) -> str:
    """SHA-256 over the sorted-key JSON dump of a validated config."""
    payload = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def parse_experiment_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"invalid experiment config:\n{e}") from e


def load_experiment_config(
    path: Union[str, Path], seed: Optional[int] = None
) -> ExperimentConfig:
    """Read and validate a TOML experiment file.

    The base seed comes from, in rising priority: the file, POWSIM_SEED, and
    the ``seed`` argument (the CLI --seed flag).
    """
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomli.load(fh)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except tomli.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e

    config = parse_experiment_config(data)
    if seed is None and settings.seed_override is not None:
        seed = settings.seed_override
        logger.warning(f"POWSIM_SEED={seed} overrides base_seed={config.experiment.base_seed}")
    if seed is not None:
        config = config.with_seed(seed)
    return config
