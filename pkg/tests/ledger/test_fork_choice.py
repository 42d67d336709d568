import itertools

import numpy as np
import pytest

from app.exceptions import EmptyCandidatesError
from app.ledger.block import ChainView
from app.ledger.fork_choice import select_best_tip, tip_key


def _view(tip, work, seen):
    return ChainView(tip=tip, cumulative_work=work, first_seen_tick={tip: seen})


def test_single_candidate():
    view = _view(1, 3.0, 2)
    assert select_best_tip([view]) == view


def test_tie_broken_by_first_seen():
    views = [_view(1, 10.0, 5), _view(2, 12.0, 3), _view(3, 12.0, 4)]
    assert select_best_tip(views).tip == 2


def test_full_tie_broken_by_smallest_id():
    views = [_view(7, 5.0, 1), _view(4, 5.0, 1)]
    assert select_best_tip(views).tip == 4


def test_empty_candidates_raise():
    with pytest.raises(EmptyCandidatesError):
        select_best_tip([])


def test_matches_brute_force_order():
    rng = np.random.default_rng(0)
    for _ in range(50):
        size = int(rng.integers(1, 6))
        tips = rng.permutation(20)[:size]
        views = [
            _view(int(t), float(rng.integers(1, 4)), int(rng.integers(0, 3))) for t in tips
        ]
        best = max(views, key=lambda v: tip_key(v.cumulative_work, v.tip_first_seen, v.tip))
        oracle = sorted(views, key=lambda v: (-v.cumulative_work, v.tip_first_seen, v.tip))[0]
        assert select_best_tip(views) == best == oracle
        for perm in itertools.islice(itertools.permutations(views), 6):
            assert select_best_tip(list(perm)) == oracle
