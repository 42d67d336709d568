from app.experiment.acceptance import AcceptanceReport, verify_acceptance
from app.experiment.base import BaseExperiment, CriterionResult
from app.experiment.bundle import ResultBundle, read_bundle, write_bundle
from app.experiment.config import ExperimentConfig, config_hash, load_experiment_config
from app.experiment.factory import ExperimentFactory
from app.experiment.runner import run_experiment

__all__ = [
    "AcceptanceReport",
    "BaseExperiment",
    "CriterionResult",
    "ExperimentConfig",
    "ExperimentFactory",
    "ResultBundle",
    "config_hash",
    "load_experiment_config",
    "read_bundle",
    "run_experiment",
    "verify_acceptance",
    "write_bundle",
]
