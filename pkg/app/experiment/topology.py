from pathlib import Path
from typing import Any, Dict, List, Optional

from app.experiment.base import BaseExperiment, CriterionResult, Row
from app.experiment.builders import build_graph
from app.experiment.stats import mean
from app.rng import TOPOLOGY, make_rng
from app.schema import ExperimentKind
from app.topology.codec import write_graph
from app.topology.generator import attach_peripheral
from app.topology.metrics import (
    clustering_coefficient,
    diameter,
    effective_diameter,
    miner_pair_cuts,
)


class TopologyClaims(BaseExperiment):
    """Miner-core cuts and diameters before and after attaching peripheral nodes"""

    kind = ExperimentKind.TOPOLOGY_CLAIMS
    criteria = ["vertex_cuts_unchanged", "core_diameter_unchanged", "diameter_not_decreased"]

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        sweep = self.config.sweep
        graph = build_graph(self.config.topology, seed)
        miners = graph.miners
        anchors = [v for v in graph.nodes if v not in set(miners)]

        grown = graph
        rng = make_rng(seed, TOPOLOGY, 1)
        for _ in range(sweep.peripheral_nodes):
            grown = attach_peripheral(grown, anchors[int(rng.integers(len(anchors)))])
        if trace_dir is not None:
            write_graph(graph, trace_dir / f"rep{index:04d}_before.graph")
            write_graph(grown, trace_dir / f"rep{index:04d}_after.graph")

        cuts_before = miner_pair_cuts(graph)
        cuts_after = miner_pair_cuts(grown)
        return [
            self.base_row(
                index,
                seed,
                miner_pairs=len(cuts_before),
                cuts_unchanged=cuts_before == cuts_after,
                min_cut=min(cuts_before.values(), default=0),
                core_diameter_before=effective_diameter(graph, sweep.effective_epsilon, miners),
                core_diameter_after=effective_diameter(grown, sweep.effective_epsilon, miners),
                diameter_before=diameter(graph),
                diameter_after=diameter(grown),
                core_clustering=clustering_coefficient(graph, miners),
                clustering=clustering_coefficient(graph),
            )
        ]

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        return {
            "replications": len(rows),
            "cuts_unchanged": sum(1 for r in rows if r["cuts_unchanged"]),
            "core_diameter_unchanged": sum(
                1 for r in rows if r["core_diameter_before"] == r["core_diameter_after"]
            ),
            "diameter_not_decreased": sum(
                1 for r in rows if r["diameter_after"] >= r["diameter_before"]
            ),
            "mean_core_clustering": mean([r["core_clustering"] for r in rows]),
            "mean_clustering": mean([r["clustering"] for r in rows]),
        }

    def evaluate(self, rows, summary, acceptance) -> List[CriterionResult]:
        n = summary["replications"]
        return [
            CriterionResult(
                name=name,
                passed=summary[key] == n,
                measured=f"{summary[key]}/{n} replications",
                expected=expected,
            )
            for name, key, expected in (
                ("vertex_cuts_unchanged", "cuts_unchanged", "miner-pair cuts identical"),
                ("core_diameter_unchanged", "core_diameter_unchanged", "effective diameter of the miner core identical"),
                ("diameter_not_decreased", "diameter_not_decreased", "full diameter weakly larger"),
            )
        ]
