from pathlib import Path
from typing import Any, Dict, List, Optional

from app.engine.export import write_trace_csv
from app.engine.simulator import run_simulation
from app.experiment.base import BaseExperiment, CriterionResult, Row
from app.experiment.builders import build_graph, build_sim_config
from app.experiment.config import config_hash
from app.experiment.stats import mean
from app.schema import ExperimentKind, TxClass
from app.surplus.accounting import (
    DecisionLatency,
    classify_trace_transactions,
    decision_latency_excess,
    surplus_report_rows,
    write_surplus_report,
)
from app.surplus.model import default_cost_model

HIGH_SURPLUS_CLASSES = (TxClass.T1_STANDARD, TxClass.T2_METADATA, TxClass.T4_ORPHANED)


def _pooled(rows: List[Row], latency: str, samples: str) -> Optional[float]:
    count = sum(r[samples] for r in rows)
    if count == 0:
        return None
    return sum(r[latency] * r[samples] for r in rows if r[samples]) / count


class SurplusExperiment(BaseExperiment):
    """Validation surplus ratio per transaction class.

    With ``surplus.trace_accounting`` each replication also simulates the
    configured network. Every class row then carries the class's transaction
    count in that trace, and the replication's home-node rejection latency
    and SPV confirmation latency.
    """

    kind = ExperimentKind.SURPLUS
    criteria = ["surplus_high", "surplus_low"]

    def _trace_columns(self, index: int, seed: int, trace_dir: Optional[Path]) -> Dict[TxClass, Dict[str, Any]]:
        graph = build_graph(self.config.topology, seed)
        trace = run_simulation(build_sim_config(self.config, graph, seed), config_hash(self.config))
        if trace_dir is not None:
            write_trace_csv(trace, trace_dir / f"rep{index:04d}_trace.csv")
        counts = classify_trace_transactions(trace)
        latency = decision_latency_excess([trace])
        shared = {
            "hfn_reject_latency": latency.hfn_reject_latency,
            "hfn_samples": latency.hfn_samples,
            "spv_confirm_latency": latency.spv_confirm_latency,
            "spv_samples": latency.spv_samples,
        }
        return {tx_class: {"trace_txs": counts[tx_class], **shared} for tx_class in TxClass}

    def replicate(self, index: int, seed: int, trace_dir: Optional[Path] = None) -> List[Row]:
        model = self.config.surplus.cost_model or default_cost_model()
        samples = self.config.surplus.samples
        if trace_dir is not None:
            write_surplus_report(trace_dir / f"rep{index:04d}_surplus.csv", model, samples, seed)
        traced = {}
        if self.config.surplus.trace_accounting:
            traced = self._trace_columns(index, seed, trace_dir)
        return [
            self.base_row(
                index,
                seed,
                tx_class=row["class"],
                surplus=row["surplus"],
                ratio=row["ratio"],
                **traced.get(TxClass(row["class"]), {}),
            )
            for row in surplus_report_rows(model, samples, seed)
        ]

    def summarize(self, rows: List[Row]) -> Dict[str, Any]:
        model = self.config.surplus.cost_model or default_cost_model()
        summary: Dict[str, Any] = {"model_hash": model.model_hash()}
        for tx_class in TxClass:
            cell = [r for r in rows if r["tx_class"] == tx_class.value]
            summary[tx_class.value] = {
                "mean_ratio": mean([r["ratio"] for r in cell]),
                "mean_surplus": mean([r["surplus"] for r in cell]),
            }
        if rows and "trace_txs" in rows[0]:
            summary["trace"] = self._trace_summary(rows)
        return summary

    @staticmethod
    def _trace_summary(rows: List[Row]) -> Dict[str, Any]:
        # latency columns repeat on every class row of a replication
        per_replication = [r for r in rows if r["tx_class"] == TxClass.T1_STANDARD.value]
        latency = DecisionLatency(
            hfn_reject_latency=_pooled(per_replication, "hfn_reject_latency", "hfn_samples"),
            spv_confirm_latency=_pooled(per_replication, "spv_confirm_latency", "spv_samples"),
            hfn_samples=sum(r["hfn_samples"] for r in per_replication),
            spv_samples=sum(r["spv_samples"] for r in per_replication),
        )
        return {
            "transactions": {
                tx_class.value: sum(r["trace_txs"] for r in rows if r["tx_class"] == tx_class.value)
                for tx_class in TxClass
            },
            "decision_latency": {**latency.model_dump(), "excess": latency.excess},
        }

    def evaluate(self, rows, summary, acceptance) -> List[CriterionResult]:
        results = [
            CriterionResult(
                name=f"surplus_high[{tx_class.value}]",
                passed=summary[tx_class.value]["mean_ratio"] > acceptance.surplus_high,
                measured=f"ratio {summary[tx_class.value]['mean_ratio']:.5f}",
                expected=f"> {acceptance.surplus_high}",
            )
            for tx_class in HIGH_SURPLUS_CLASSES
        ]
        low = summary[TxClass.T3_MALFORMED.value]["mean_ratio"]
        results.append(
            CriterionResult(
                name=f"surplus_low[{TxClass.T3_MALFORMED.value}]",
                passed=low < acceptance.surplus_low,
                measured=f"ratio {low:.5f}",
                expected=f"< {acceptance.surplus_low}",
            )
        )
        return results
