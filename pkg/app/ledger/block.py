from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.exceptions import InvalidParameterError, UnknownNodeError
from app.schema import TxClass

GENESIS_ID = 0
BLOCK_WORK = 1.0


class Block(BaseModel):
    """A simulated proof-of-work block; validity is a flag, not a script run"""

    block_id: int = Field(..., ge=0)
    parent_id: Optional[int] = Field(None, description="None marks the genesis block")
    height: int = Field(..., ge=0)
    producer: Optional[int] = Field(None, description="Producing node; None for genesis")
    work: float = Field(BLOCK_WORK, gt=0)
    consensus_valid: bool = True
    policy_tag: int = Field(0, ge=0, description="Policy of the producer at production time")
    tx_class_counts: Dict[TxClass, int] = Field(default_factory=dict)
    tick: int = Field(0, ge=0, description="Tick the block was produced")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _genesis_shape(self) -> "Block":
        if self.parent_id is None and self.height != 0:
            raise ValueError("a block without parent must have height 0")
        if self.parent_id is not None and self.height == 0:
            raise ValueError("only the genesis block has height 0")
        return self

    @property
    def is_genesis(self) -> bool:
        return self.parent_id is None


class ChainView(BaseModel):
    """A node's view of its best chain: tip, cumulative work, and first-seen ticks"""

    tip: int
    cumulative_work: float = Field(..., ge=0)
    first_seen_tick: Dict[int, int] = Field(default_factory=dict)
    path: List[int] = Field(default_factory=list, description="Genesis-to-tip block ids, when known")

    model_config = {"frozen": True}

    @property
    def tip_first_seen(self) -> int:
        return self.first_seen_tick.get(self.tip, 0)


class BlockTree:
    """Append-only block store shared by every node of a run.

    Cumulative work and chain validity are computed once, when a block is
    added, since blocks never change.
    """

    def __init__(self, genesis_policy: int = 0):
        self.blocks: Dict[int, Block] = {}
        self._work: Dict[int, float] = {}
        self._chain_valid: Dict[int, bool] = {}
        self.add(Block(block_id=GENESIS_ID, height=0, policy_tag=genesis_policy))

    @property
    def genesis(self) -> Block:
        return self.blocks[GENESIS_ID]

    def __contains__(self, block_id: int) -> bool:
        return block_id in self.blocks

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, block_id: int) -> Block:
        try:
            return self.blocks[block_id]
        except KeyError:
            raise UnknownNodeError(block_id) from None

    def next_id(self) -> int:
        return len(self.blocks)

    def add(self, block: Block) -> Block:
        if block.block_id in self.blocks:
            raise InvalidParameterError(f"block id {block.block_id} already present")
        if block.parent_id is None:
            if self.blocks:
                raise InvalidParameterError("tree already has a genesis block")
            self._work[block.block_id] = block.work
            self._chain_valid[block.block_id] = block.consensus_valid
        else:
            parent = self[block.parent_id]
            if block.height != parent.height + 1:
                raise InvalidParameterError(
                    f"block {block.block_id} height {block.height} does not follow "
                    f"parent height {parent.height}"
                )
            self._work[block.block_id] = self._work[parent.block_id] + block.work
            self._chain_valid[block.block_id] = (
                self._chain_valid[parent.block_id] and block.consensus_valid
            )
        self.blocks[block.block_id] = block
        return block

    def path(self, tip: int) -> List[int]:
        """Block ids from genesis to ``tip``, inclusive."""
        ids = []
        current: Optional[int] = tip
        while current is not None:
            ids.append(current)
            current = self[current].parent_id
        ids.reverse()
        return ids

    def is_ancestor(self, ancestor: int, descendant: int) -> bool:
        """True when ``ancestor`` lies on the path to ``descendant`` (inclusive)."""
        target_height = self[ancestor].height
        current: Optional[int] = descendant
        while current is not None:
            block = self[current]
            if block.height < target_height:
                return False
            if current == ancestor:
                return True
            current = block.parent_id
        return False

    def path_work(self, tip: int) -> float:
        return self._work[self[tip].block_id]

    def chain_valid(self, tip: int) -> bool:
        return self._chain_valid[self[tip].block_id]

    def chain_view(self, tip: int, first_seen: Dict[int, int]) -> ChainView:
        path = self.path(tip)
        return ChainView(
            tip=tip,
            cumulative_work=sum(self.blocks[b].work for b in path),
            first_seen_tick={b: first_seen[b] for b in path if b in first_seen},
            path=path,
        )
