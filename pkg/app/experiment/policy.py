from pathlib import Path
from typing import Any, Dict, List, Optional

from app.exceptions import ConfigError
from app.experiment.base import BaseExperiment, CriterionResult, Row
from app.experiment.builders import config_errors, policy_kernel, policy_space
from app.experiment.config import AcceptanceSettings
from app.experiment.stats import mean, standard_error, strictly_increasing
from app.policy.divergence import divergence_lower_bound, divergence_metric
from app.policy.dynamics import PolicyDynamics, redundant_nodes, write_policy_trajectories
from app.policy.kernel import estimate_mismatch_p
from app.schema import ExperimentKind
from app.topology.generator import add_isolated, generate_watts_strogatz


class PolicyDivergence(BaseExperiment):
    """Policy disagreement as isolated (redundant) home nodes are added.

    The connected part is a Watts-Strogatz graph on n - |R| nodes; the
    redundant nodes have no peers and drift on their own.
    """

    kind = ExperimentKind.POLICY_DIVERGENCE
    criteria = ["divergence_bound", "divergence_monotone"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        topology = self.config.topology
        settings = self.config.policy
        kernel = policy_kernel(self.config)
        space = policy_space(self.config)
        p_hat = estimate_mismatch_p(
            kernel, space, settings.horizon, settings.mismatch_replications, seed
        )
        rows = []
        for redundant in self.config.sweep.redundant_counts:
            connected = topology.n - redundant
            if connected <= topology.k:
                raise ConfigError(
                    f"redundant count {redundant} leaves {connected} connected nodes; need > k={topology.k}"
                )
            with config_errors("topology"):
                graph = generate_watts_strogatz(
                    connected, topology.k, topology.beta, seed, topology.lat_min, topology.lat_max
                )
            graph = add_isolated(graph, redundant)
            dynamics = PolicyDynamics(graph, kernel, space, seed)
            trajectory = [dynamics.current.copy()] + dynamics.run(settings.horizon)
            if trace_dir is not None:
                write_policy_trajectories(
                    trace_dir / f"rep{index:04d}_r{redundant}.csv",
                    trajectory,
                    set(redundant_nodes(graph)),
                    header=f"seed={seed} redundant={redundant}",
                )
            d = divergence_metric(dynamics.current)
            bound = divergence_lower_bound(topology.n, redundant, p_hat)
            rows.append(
                self.base_row(
                    index,
                    seed,
                    redundant=redundant,
                    divergence=d,
                    bound=bound,
                    mismatch_p=p_hat,
                    meets_bound=d >= bound,
                )
            )
        return rows

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        summary = {}
        for redundant in sorted(self.config.sweep.redundant_counts):
            cell = [r for r in rows if r["redundant"] == redundant]
            values = [r["divergence"] for r in cell]
            summary[str(redundant)] = {
                "mean_divergence": mean(values),
                "se_divergence": standard_error(values),
                "mean_bound": mean([r["bound"] for r in cell]),
                "share_meeting_bound": mean([1.0 if r["meets_bound"] else 0.0 for r in cell]),
            }
        return summary

    def evaluate(
        self, rows: List[Row], summary: Dict[str, Any], acceptance: AcceptanceSettings
    ) -> List[CriterionResult]:
        results = [
            CriterionResult(
                name=f"divergence_bound[R={redundant}]",
                passed=cell["share_meeting_bound"] >= acceptance.bound_share,
                measured=(
                    f"{cell['share_meeting_bound']:.3f} of replications, "
                    f"mean D={cell['mean_divergence']:.4f} bound={cell['mean_bound']:.4f}"
                ),
                expected=f"D >= bound in at least {acceptance.bound_share:.0%} of replications",
            )
            for redundant, cell in summary.items()
        ]
        means = [cell["mean_divergence"] for cell in summary.values()]
        results.append(
            CriterionResult(
                name="divergence_monotone",
                passed=strictly_increasing(means),
                measured=", ".join(f"R={r}:{c['mean_divergence']:.4f}" for r, c in summary.items()),
                expected="mean D strictly increasing in the redundant count",
            )
        )
        return results
