from pathlib import Path
from typing import Any, Dict, List, Optional

from app.experiment.base import BaseExperiment, CriterionResult, Row
from app.experiment.stats import mean
from app.game.equilibrium import (
    canonical_profile,
    enumerate_equilibria,
    in_spv_dominance_regime,
    is_nash_equilibrium,
    miners_enforce,
    random_profile,
    run_best_response_dynamics,
)
from app.rng import PROFILES, make_rng
from app.schema import ExperimentKind, NodeRole


def game_roles(nodes: int, miners: int):
    """Nodes 0..miners-1 mine; the rest are home nodes choosing a strategy."""
    return {i: NodeRole.MINER if i < miners else NodeRole.HFN for i in range(nodes)}


class Equilibrium(BaseExperiment):
    """Best-response dynamics from a random profile, plus exhaustive checks on small games"""

    kind = ExperimentKind.EQUILIBRIUM
    criteria = ["equilibrium_convergence", "equilibrium_enumeration"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        game = self.config.game
        params = game.params()
        roles = game_roles(game.nodes, min(game.miners, game.nodes))
        result = run_best_response_dynamics(
            random_profile(roles, seed), params, game.max_rounds, game.sequential
        )

        rng = make_rng(seed, PROFILES, 1)
        small_nodes = int(rng.integers(1, game.enumeration_max_nodes + 1))
        small_miners = int(rng.integers(0, small_nodes + 1))
        small_roles = game_roles(small_nodes, small_miners)
        equilibria = enumerate_equilibria(small_roles, params)
        target = canonical_profile(small_roles).assignment

        return [
            self.base_row(
                index,
                seed,
                converged=result.converged,
                rounds=result.rounds,
                reached_canonical=result.profile.assignment == canonical_profile(roles).assignment,
                final_is_nash=bool(is_nash_equilibrium(result.profile, params)),
                enum_nodes=small_nodes,
                enum_miners=small_miners,
                enum_equilibria=len(equilibria),
                enum_matches=len(equilibria) == 1 and equilibria[0].assignment == target,
            )
        ]

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        params = self.config.game.params()
        return {
            "replications": len(rows),
            "in_spv_dominance_regime": in_spv_dominance_regime(params, warn=False),
            "miners_enforce": miners_enforce(params),
            "all_converged": all(r["converged"] for r in rows),
            "max_rounds_used": max((r["rounds"] for r in rows), default=0),
            "share_canonical": mean([1.0 if r["reached_canonical"] else 0.0 for r in rows]),
            "enumeration_matches": sum(1 for r in rows if r["enum_matches"]),
        }

    def evaluate(self, rows, summary, acceptance) -> List[CriterionResult]:
        return [
            CriterionResult(
                name="equilibrium_convergence",
                passed=summary["share_canonical"] == 1.0
                and summary["max_rounds_used"] <= acceptance.max_rounds,
                measured=(
                    f"{summary['share_canonical']:.0%} reached the canonical profile, "
                    f"at most {summary['max_rounds_used']} rounds"
                ),
                expected=f"every replication canonical within {acceptance.max_rounds} rounds",
            ),
            CriterionResult(
                name="equilibrium_enumeration",
                passed=summary["enumeration_matches"] == summary["replications"],
                measured=f"{summary['enumeration_matches']}/{summary['replications']} small games",
                expected="the canonical profile is the only pure equilibrium",
            ),
        ]
