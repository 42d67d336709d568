import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from app.exceptions import DomainError, InvalidParameterError
from app.rng import SURPLUS, make_rng
from app.schema import Divergent, NodeRole, TxClass
from app.surplus.model import COST_UNITS, CostModel

REPORT_COLUMNS = ["class", "samples", "surplus", "ratio", "model_hash"]


def _class_index(tx_class: TxClass) -> int:
    return list(TxClass).index(tx_class)


def sample_invalid(tx_class: TxClass, model: CostModel, sample_count: int, seed: int) -> np.ndarray:
    """Boolean invalidity draw per sampled transaction."""
    if sample_count < 1:
        raise InvalidParameterError(f"sample_count must be >= 1, got {sample_count}")
    rng = make_rng(seed, SURPLUS, _class_index(tx_class))
    return rng.random(sample_count) < model.invalid_probability[tx_class]


def validation_surplus(tx_class: TxClass, model: CostModel, sample_count: int, seed: int) -> float:
    """Sum over samples of c_home - [invalid] * c_reject."""
    invalid = int(sample_invalid(tx_class, model, sample_count, seed).sum())
    return sample_count * model.c_home[tx_class] - invalid * model.c_reject[tx_class]


def surplus_ratio(tx_class: TxClass, model: CostModel, sample_count: int, seed: int) -> float:
    cost = model.c_home[tx_class]
    if cost <= 0:
        raise DomainError(f"c_home[{tx_class.value}] is zero; the surplus ratio is undefined")
    return validation_surplus(tx_class, model, sample_count, seed) / (sample_count * cost)


def entropy_inefficiency_ratio(
    redundant_cost: float, enforcement_effect_probability: float
) -> Union[float, Divergent]:
    """Redundant cost per unit of enforcement effect; DIVERGENT when there is no effect."""
    if redundant_cost < 0:
        raise DomainError(f"redundant_cost must be >= 0, got {redundant_cost}")
    if not 0.0 <= enforcement_effect_probability <= 1.0:
        raise DomainError(
            f"enforcement_effect_probability must lie in [0, 1], got {enforcement_effect_probability}"
        )
    if redundant_cost == 0:
        return 0.0
    if enforcement_effect_probability == 0:
        return Divergent.DIVERGENT
    return redundant_cost / enforcement_effect_probability


def surplus_report_rows(model: CostModel, sample_count: int, seed: int) -> List[Dict]:
    model_hash = model.model_hash()
    rows = []
    for tx_class in TxClass:
        rows.append(
            {
                "class": tx_class.value,
                "samples": sample_count,
                "surplus": validation_surplus(tx_class, model, sample_count, seed),
                "ratio": surplus_ratio(tx_class, model, sample_count, seed),
                "model_hash": model_hash,
            }
        )
    return rows


def write_surplus_report(
    path: Union[str, Path], model: CostModel, sample_count: int, seed: int
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        fh.write(f"# model_hash={model.model_hash()} seed={seed} units={COST_UNITS}\n")
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in surplus_report_rows(model, sample_count, seed):
            writer.writerow({**row, "surplus": repr(row["surplus"]), "ratio": repr(row["ratio"])})
    return path


def classify_trace_transactions(trace) -> Dict[TxClass, int]:
    """Transaction counts of a finished trace by class.

    Canonical blocks give T1/T2, consensus-invalid blocks give T3, and valid
    blocks left off the final global chain count as T4.
    """
    counts = {cls: 0 for cls in TxClass}
    canonical = set(trace.tree.path(trace.frame().global_tip))
    for block in trace.tree.blocks.values():
        if block.is_genesis:
            continue
        if not block.consensus_valid:
            counts[TxClass.T3_MALFORMED] += sum(block.tx_class_counts.values())
        elif block.block_id in canonical:
            for cls, n in block.tx_class_counts.items():
                counts[cls] += n
        else:
            counts[TxClass.T4_ORPHANED] += sum(block.tx_class_counts.values())
    return counts


class DecisionLatency(BaseModel):
    """Home-node rejection latency of invalid blocks against SPV confirmation latency"""

    hfn_reject_latency: Optional[float] = None
    spv_confirm_latency: Optional[float] = None
    hfn_samples: int = 0
    spv_samples: int = 0

    @property
    def excess(self) -> Optional[float]:
        """Relative excess of home-node latency, e.g. 0.32 for 32% slower."""
        if not self.hfn_reject_latency or not self.spv_confirm_latency:
            return None
        return self.hfn_reject_latency / self.spv_confirm_latency - 1.0


def decision_latency_excess(traces: Sequence) -> DecisionLatency:
    hfn: List[int] = []
    spv: List[int] = []
    for trace in traces:
        tree = trace.tree
        for r in trace.rejections:
            block = tree[r.block_id]
            if not block.consensus_valid and trace.roles[r.node] == NodeRole.HFN:
                hfn.append(r.tick - block.tick)
        for a in trace.adoptions:
            block = tree[a.block_id]
            if block.consensus_valid and trace.roles[a.node] == NodeRole.SPV:
                spv.append(a.tick - block.tick)
    return DecisionLatency(
        hfn_reject_latency=float(np.mean(hfn)) if hfn else None,
        spv_confirm_latency=float(np.mean(spv)) if spv else None,
        hfn_samples=len(hfn),
        spv_samples=len(spv),
    )
