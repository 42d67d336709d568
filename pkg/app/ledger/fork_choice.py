from functools import reduce
from typing import Sequence, Tuple

from app.exceptions import EmptyCandidatesError
from app.ledger.block import ChainView


def tip_key(work: float, first_seen: int, block_id: int) -> Tuple[float, int, int]:
    """Sort key whose maximum is the preferred tip.

    Most work wins, then the earliest first-seen tick, then the smallest id.
    """
    return (work, -first_seen, -block_id)


def _key(view: ChainView) -> Tuple[float, int, int]:
    return tip_key(view.cumulative_work, view.tip_first_seen, view.tip)


def prefer(a: ChainView, b: ChainView) -> ChainView:
    return a if _key(a) >= _key(b) else b


def select_best_tip(candidates: Sequence[ChainView]) -> ChainView:
    if not candidates:
        raise EmptyCandidatesError("select_best_tip needs at least one candidate")
    return reduce(prefer, candidates)
