# Ensure the project root is on sys.path and share small graphs across test modules
import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(__file__))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from app.topology.graph import SPV, NodeClass  # noqa: E402
from tests.helpers import complete_pairs, cycle_pairs, make_graph  # noqa: E402


@pytest.fixture
def path4():
    return make_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def cycle8():
    return make_graph(8, cycle_pairs(8))


@pytest.fixture
def k5():
    return make_graph(5, complete_pairs(range(5)))


@pytest.fixture
def single_miner_line():
    """Miner 0 with home nodes 1, 2 and an SPV client 3 hanging off the miner."""
    roles = {0: NodeClass.miner(1.0), 3: SPV}
    return make_graph(4, [(0, 1), (1, 2), (0, 3)], roles=roles)
