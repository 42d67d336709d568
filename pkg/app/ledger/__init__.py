from app.ledger.block import BLOCK_WORK, GENESIS_ID, Block, BlockTree, ChainView
from app.ledger.finality import (
    InertiaFit,
    RaceResult,
    finality_probability,
    fit_inertia_rate,
    reorg_probability_bound,
    simulate_reorg_races,
)
from app.ledger.fork_choice import select_best_tip, tip_key

__all__ = [
    "Block",
    "BlockTree",
    "ChainView",
    "GENESIS_ID",
    "BLOCK_WORK",
    "select_best_tip",
    "tip_key",
    "reorg_probability_bound",
    "finality_probability",
    "simulate_reorg_races",
    "RaceResult",
    "fit_inertia_rate",
    "InertiaFit",
]
