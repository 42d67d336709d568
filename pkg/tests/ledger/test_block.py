import pytest

from app.exceptions import InvalidParameterError, UnknownNodeError
from app.ledger.block import GENESIS_ID, Block, BlockTree


def _tree():
    """genesis <- 1 <- 2 <- 4 and genesis <- 1 <- 3 (3 invalid)."""
    tree = BlockTree()
    tree.add(Block(block_id=1, parent_id=0, height=1, producer=5))
    tree.add(Block(block_id=2, parent_id=1, height=2, producer=5))
    tree.add(Block(block_id=3, parent_id=1, height=2, producer=6, consensus_valid=False))
    tree.add(Block(block_id=4, parent_id=2, height=3, producer=6))
    return tree


def test_genesis_shape():
    with pytest.raises(ValueError):
        Block(block_id=1, height=1)
    with pytest.raises(ValueError):
        Block(block_id=1, parent_id=0, height=0)
    assert BlockTree().genesis.block_id == GENESIS_ID


def test_add_checks_height_and_parent():
    tree = BlockTree()
    with pytest.raises(InvalidParameterError):
        tree.add(Block(block_id=1, parent_id=0, height=2))
    with pytest.raises(UnknownNodeError):
        tree.add(Block(block_id=1, parent_id=9, height=1))
    tree.add(Block(block_id=1, parent_id=0, height=1))
    with pytest.raises(InvalidParameterError):
        tree.add(Block(block_id=1, parent_id=0, height=1))


def test_path_and_ancestry():
    tree = _tree()
    assert tree.path(4) == [0, 1, 2, 4]
    assert tree.is_ancestor(1, 4)
    assert tree.is_ancestor(4, 4)
    assert not tree.is_ancestor(3, 4)
    assert not tree.is_ancestor(4, 1)
    assert tree.next_id() == 5


def test_work_and_validity_accumulate():
    tree = _tree()
    assert tree.path_work(4) == 4.0
    assert tree.chain_valid(4)
    assert not tree.chain_valid(3)


def test_chain_view_keeps_first_seen_on_path():
    view = _tree().chain_view(4, {0: 0, 1: 2, 3: 5, 4: 7})
    assert view.cumulative_work == 4.0
    assert view.first_seen_tick == {0: 0, 1: 2, 4: 7}
    assert view.tip_first_seen == 7
    assert view.path == [0, 1, 2, 4]
