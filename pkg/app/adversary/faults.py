from typing import Dict, List, Optional, Sequence

from app.adversary.config import FaultRecord
from app.exceptions import DomainError, InvalidParameterError
from app.ledger.block import BlockTree, ChainView
from app.schema import MessageKind, NodeRole


def fault_injectability(
    record: FaultRecord,
    victim_local_chain: ChainView,
    global_chain: ChainView,
    tree: Optional[BlockTree] = None,
) -> bool:
    """True iff the victim's tip is off the ancestor path of the global tip.

    The global path comes from ``global_chain.path`` or, when that is empty,
    from walking ``tree``.
    """
    if global_chain.path:
        return victim_local_chain.tip not in set(global_chain.path)
    if tree is None:
        raise InvalidParameterError("global chain view carries no path and no tree was given")
    return not tree.is_ancestor(victim_local_chain.tip, global_chain.tip)


def expected_fault_surface(
    records: Sequence[FaultRecord], message_probabilities: Dict[MessageKind, float]
) -> float:
    """Sum over deviating records of P(message kind)."""
    for kind, probability in message_probabilities.items():
        if not 0.0 <= probability <= 1.0:
            raise DomainError(f"probability for {kind.value} must lie in [0, 1], got {probability}")
    return float(
        sum(
            message_probabilities.get(r.message_kind, 0.0)
            for r in records
            if r.caused_deviation
        )
    )


def _bare_view(tree: BlockTree, block_id: int) -> ChainView:
    return ChainView(tip=block_id, cumulative_work=tree.path_work(block_id))


def evaluate_fault_records(trace) -> List[FaultRecord]:
    """Fill ``caused_deviation`` on every fault record of a finished trace.

    A record deviates when the victim's tip is not an ancestor of the global
    tip at the end of the delivery tick; home nodes are judged once their
    validation delay has passed.
    """
    horizon = trace.frames[-1].tick
    evaluated: List[FaultRecord] = []
    for record in trace.fault_records:
        tick = record.tick
        if trace.roles[record.target] == NodeRole.HFN:
            tick = min(tick + trace.hfn_validation_delay, horizon)
        frame = trace.frames[tick]
        victim = _bare_view(trace.tree, int(frame.tips[record.target]))
        deviated = fault_injectability(
            record, victim, _bare_view(trace.tree, frame.global_tip), trace.tree
        )
        evaluated.append(record.model_copy(update={"caused_deviation": deviated}))
    trace.fault_records = evaluated
    return evaluated
