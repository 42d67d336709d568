from app.game.equilibrium import (
    best_response,
    canonical_profile,
    enumerate_equilibria,
    equilibrium_report,
    in_spv_dominance_regime,
    is_nash_equilibrium,
    miners_enforce,
    random_profile,
    run_best_response_dynamics,
    utility,
)
from app.game.model import DynamicsResult, NashCheck, StrategyProfile, UtilityParams

__all__ = [
    "UtilityParams",
    "StrategyProfile",
    "NashCheck",
    "DynamicsResult",
    "utility",
    "best_response",
    "is_nash_equilibrium",
    "run_best_response_dynamics",
    "canonical_profile",
    "random_profile",
    "enumerate_equilibria",
    "in_spv_dominance_regime",
    "miners_enforce",
    "equilibrium_report",
]
