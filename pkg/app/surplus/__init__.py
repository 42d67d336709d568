from app.surplus.accounting import (
    DecisionLatency,
    classify_trace_transactions,
    decision_latency_excess,
    entropy_inefficiency_ratio,
    surplus_ratio,
    surplus_report_rows,
    validation_surplus,
    write_surplus_report,
)
from app.surplus.model import COST_UNITS, CostModel, default_cost_model

__all__ = [
    "CostModel",
    "COST_UNITS",
    "default_cost_model",
    "validation_surplus",
    "surplus_ratio",
    "entropy_inefficiency_ratio",
    "surplus_report_rows",
    "write_surplus_report",
    "classify_trace_transactions",
    "decision_latency_excess",
    "DecisionLatency",
]
