from pathlib import Path
from typing import Any, Dict, List, Optional

from app.adversary.config import AdversaryConfig
from app.engine.export import write_trace_csv
from app.engine.metrics import divergence_probability, latency_divergence_curve
from app.engine.simulator import run_simulation
from app.experiment.base import BaseExperiment, CriterionResult, Row
from app.experiment.builders import build_graph, build_sim_config
from app.experiment.config import AcceptanceSettings, config_hash
from app.experiment.stats import mean, one_sided_greater, standard_error
from app.schema import ExperimentKind, NodeRole


def _by_replication(rows: List[Row]) -> List[Row]:
    return sorted(rows, key=lambda r: r["replication"])


class PartitionDivergence(BaseExperiment):
    """Home-node vs SPV tip disagreement under random edge partitions"""

    kind = ExperimentKind.PARTITION_DIVERGENCE
    criteria = ["partition_ordering"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        graph = build_graph(self.config.topology, seed)
        digest = config_hash(self.config)
        rows = []
        for p in self.config.sweep.partition_probabilities:
            adversary = self.config.adversary.model_copy(
                update={"seed": seed, "partition_probability": p}
            )
            trace = run_simulation(build_sim_config(self.config, graph, seed, adversary=adversary), digest)
            if trace_dir is not None:
                write_trace_csv(trace, trace_dir / f"rep{index:04d}_p{p}.csv")
            frames = trace.frames[1:]
            rows.append(
                self.base_row(
                    index,
                    seed,
                    p=p,
                    delta_hfn=mean([f.delta_hfn for f in frames]),
                    delta_spv=mean([f.delta_spv for f in frames]),
                    delta_hfn_horizon=frames[-1].delta_hfn,
                    delta_spv_horizon=frames[-1].delta_spv,
                )
            )
        return rows

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        summary = {}
        for p in self.config.sweep.partition_probabilities:
            cell = _by_replication([r for r in rows if r["p"] == p])
            hfn = [r["delta_hfn"] for r in cell]
            spv = [r["delta_spv"] for r in cell]
            summary[repr(p)] = {
                "replications": len(cell),
                "mean_delta_hfn": mean(hfn),
                "se_delta_hfn": standard_error(hfn),
                "mean_delta_spv": mean(spv),
                "se_delta_spv": standard_error(spv),
                "mean_delta_hfn_horizon": mean([r["delta_hfn_horizon"] for r in cell]),
                "mean_delta_spv_horizon": mean([r["delta_spv_horizon"] for r in cell]),
                "p_value": one_sided_greater(hfn, spv),
            }
        return summary

    def evaluate(
        self, rows: List[Row], summary: Dict[str, Any], acceptance: AcceptanceSettings
    ) -> List[CriterionResult]:
        results = []
        for p, cell in summary.items():
            passed = (
                cell["mean_delta_hfn"] > cell["mean_delta_spv"]
                and cell["p_value"] < acceptance.significance
            )
            results.append(
                CriterionResult(
                    name=f"partition_ordering[p={p}]",
                    passed=passed,
                    measured=(
                        f"hfn={cell['mean_delta_hfn']:.4f} spv={cell['mean_delta_spv']:.4f} "
                        f"p-value={cell['p_value']:.3g}"
                    ),
                    expected=f"hfn > spv at one-sided level {acceptance.significance}",
                )
            )
        return results


class SpvBaseline(BaseExperiment):
    """SPV clients peered to miners on a latency-1 network with no adversary"""

    kind = ExperimentKind.SPV_BASELINE
    criteria = ["spv_zero_divergence"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        topology = self.config.topology
        m = topology.miner_count
        topology = topology.model_copy(
            update={"attach_spv_to_miners": True, "core_extra_edges": m * (m - 1) // 2}
        )
        graph = build_graph(topology, seed, lat_min=1, lat_max=1)
        sim = build_sim_config(
            self.config,
            graph,
            seed,
            adversary=AdversaryConfig(seed=seed),
            quiet_tail=max(self.config.simulation.quiet_tail, 5),
        )
        trace = run_simulation(sim, config_hash(self.config))
        if trace_dir is not None:
            write_trace_csv(trace, trace_dir / f"rep{index:04d}.csv")
        return [
            self.base_row(
                index,
                seed,
                spv_clients=len(trace.class_members(NodeRole.SPV)),
                spv_divergence=divergence_probability([trace], NodeRole.SPV),
                miner_divergence=divergence_probability([trace], NodeRole.MINER),
                blocks=len(trace.tree) - 1,
            )
        ]

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        values = [r["spv_divergence"] for r in rows]
        return {
            "replications": len(rows),
            "max_spv_divergence": max(values) if values else 0.0,
            "mean_spv_divergence": mean(values),
            "mean_blocks": mean([r["blocks"] for r in rows]),
        }

    def evaluate(self, rows, summary, acceptance) -> List[CriterionResult]:
        return [
            CriterionResult(
                name="spv_zero_divergence",
                passed=summary["max_spv_divergence"] == 0.0,
                measured=f"max SPV divergence {summary['max_spv_divergence']}",
                expected="exactly 0 at the horizon in every replication",
            )
        ]


class EnforcementInertness(BaseExperiment):
    """Global chain under normal and inverted home-node verdicts"""

    kind = ExperimentKind.ENFORCEMENT_INERTNESS
    criteria = ["enforcement_inertness"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        graph = build_graph(self.config.topology, seed)
        digest = config_hash(self.config)
        normal = run_simulation(
            build_sim_config(self.config, graph, seed, hfn_relay_rejected=True), digest
        )
        inverted = run_simulation(
            build_sim_config(
                self.config, graph, seed, hfn_relay_rejected=True, invert_local_verdicts=True
            ),
            digest,
        )
        if trace_dir is not None:
            write_trace_csv(normal, trace_dir / f"rep{index:04d}_normal.csv")
            write_trace_csv(inverted, trace_dir / f"rep{index:04d}_inverted.csv")
        same_tips = [f.global_tip for f in normal.frames] == [f.global_tip for f in inverted.frames]
        same_chain = normal.tree.path(normal.frame().global_tip) == inverted.tree.path(
            inverted.frame().global_tip
        )
        return [
            self.base_row(
                index,
                seed,
                identical=same_tips and same_chain,
                chain_length=len(normal.tree.path(normal.frame().global_tip)) - 1,
                rejections_normal=len(normal.rejections),
                rejections_inverted=len(inverted.rejections),
            )
        ]

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        return {
            "replications": len(rows),
            "identical": sum(1 for r in rows if r["identical"]),
            "mean_rejections_inverted": mean([r["rejections_inverted"] for r in rows]),
        }

    def evaluate(self, rows, summary, acceptance) -> List[CriterionResult]:
        return [
            CriterionResult(
                name="enforcement_inertness",
                passed=summary["identical"] == summary["replications"],
                measured=f"{summary['identical']}/{summary['replications']} identical global chains",
                expected="every replication identical",
            )
        ]


class LatencyDivergence(BaseExperiment):
    """Horizon divergence of nodes without miner peers as link latency grows"""

    kind = ExperimentKind.LATENCY_DIVERGENCE
    criteria = ["latency_divergence_elevated", "latency_divergence_monotone"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        configs = []
        for latency in self.config.sweep.latencies:
            graph = build_graph(self.config.topology, seed, lat_min=latency, lat_max=latency)
            configs.append(build_sim_config(self.config, graph, seed))
        return [
            self.base_row(index, seed, latency=latency, p_delta=p_delta)
            for latency, p_delta in latency_divergence_curve(configs, 1)
        ]

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        latencies = sorted({r["latency"] for r in rows})
        cells = {
            latency: _by_replication([r for r in rows if r["latency"] == latency])
            for latency in latencies
        }
        summary: Dict[str, Any] = {
            str(latency): {
                "mean_p_delta": mean([r["p_delta"] for r in cell]),
                "se_p_delta": standard_error([r["p_delta"] for r in cell]),
            }
            for latency, cell in cells.items()
        }
        low, high = latencies[0], latencies[-1]
        summary["p_value_high_vs_low"] = one_sided_greater(
            [r["p_delta"] for r in cells[high]], [r["p_delta"] for r in cells[low]]
        )
        return summary

    def evaluate(self, rows, summary, acceptance) -> List[CriterionResult]:
        keys = sorted((k for k in summary if k.isdigit()), key=int)
        means = [summary[k]["mean_p_delta"] for k in keys]
        slack = [acceptance.standard_errors * summary[k]["se_p_delta"] for k in keys]
        monotone = all(
            means[i + 1] + slack[i + 1] + slack[i] >= means[i] for i in range(len(means) - 1)
        )
        p_value = summary["p_value_high_vs_low"]
        return [
            CriterionResult(
                name="latency_divergence_elevated",
                passed=p_value < acceptance.significance,
                measured=f"P_delta {means[0]:.4f} at latency {keys[0]} vs {means[-1]:.4f} at {keys[-1]}, p-value={p_value:.3g}",
                expected=f"higher at the largest latency, one-sided level {acceptance.significance}",
            ),
            CriterionResult(
                name="latency_divergence_monotone",
                passed=monotone,
                measured=", ".join(f"{k}:{m:.4f}" for k, m in zip(keys, means)),
                expected="non-decreasing in latency up to Monte Carlo noise",
            ),
        ]
