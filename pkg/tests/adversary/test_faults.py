import pytest

from app.adversary.config import FaultRecord
from app.adversary.faults import expected_fault_surface, fault_injectability
from app.exceptions import DomainError, InvalidParameterError
from app.ledger.block import Block, BlockTree, ChainView
from app.schema import MessageKind


def _tree():
    """genesis <- 1 <- 2 <- 3 with an orphaned sibling 4 of block 2."""
    tree = BlockTree()
    tree.add(Block(block_id=1, parent_id=0, height=1))
    tree.add(Block(block_id=2, parent_id=1, height=2))
    tree.add(Block(block_id=3, parent_id=2, height=3))
    tree.add(Block(block_id=4, parent_id=1, height=2))
    return tree


RECORD = FaultRecord(tick=3, target=7, message_kind=MessageKind.STALE_CHAIN, block_id=4)


def test_victim_on_global_tip_is_not_injected():
    tree = _tree()
    global_view = tree.chain_view(3, {})
    assert not fault_injectability(RECORD, tree.chain_view(3, {}), global_view)


def test_victim_behind_on_the_global_path_is_not_injected():
    tree = _tree()
    assert not fault_injectability(RECORD, tree.chain_view(2, {}), tree.chain_view(3, {}))


def test_victim_on_orphaned_branch_is_injected():
    tree = _tree()
    assert fault_injectability(RECORD, tree.chain_view(4, {}), tree.chain_view(3, {}))


def test_tree_walk_matches_path_lookup():
    tree = _tree()
    bare_global = ChainView(tip=3, cumulative_work=4.0)
    for tip in range(5):
        victim = tree.chain_view(tip, {})
        expected = tip not in tree.path(3)
        assert fault_injectability(RECORD, victim, bare_global, tree) == expected
        assert fault_injectability(RECORD, victim, tree.chain_view(3, {})) == expected
    with pytest.raises(InvalidParameterError):
        fault_injectability(RECORD, tree.chain_view(1, {}), bare_global)


def test_expected_fault_surface():
    probabilities = {MessageKind.INVALID_BLOCK: 0.2, MessageKind.STALE_CHAIN: 1.0}
    assert expected_fault_surface([], probabilities) == 0.0
    deviating = RECORD.model_copy(update={"caused_deviation": True})
    assert expected_fault_surface([deviating], probabilities) == 1.0
    records = [
        deviating,
        FaultRecord(tick=1, target=2, message_kind=MessageKind.INVALID_BLOCK, caused_deviation=True),
        FaultRecord(tick=1, target=3, message_kind=MessageKind.INVALID_BLOCK, caused_deviation=False),
        FaultRecord(tick=2, target=3, message_kind=MessageKind.FORGED_HEADER_SEQUENCE, caused_deviation=True),
    ]
    assert expected_fault_surface(records, probabilities) == pytest.approx(1.2)
    with pytest.raises(DomainError):
        expected_fault_surface(records, {MessageKind.STALE_CHAIN: 1.5})
