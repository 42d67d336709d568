import math

import pytest

from app.exceptions import DegenerateDataError, DomainError
from app.ledger.finality import (
    finality_probability,
    fit_inertia_rate,
    reorg_probability_bound,
    simulate_reorg_races,
)


def test_trivial_bounds():
    assert reorg_probability_bound(0.0, 1) == 0.0
    assert reorg_probability_bound(0.3, 0) == 1.0
    assert finality_probability(0.0, 1) == 1.0
    assert finality_probability(0.3, 0) == 0.0


def test_single_confirmation_matches_gamblers_ruin():
    # the attacker either mines during the confirmation or climbs back from one behind
    q, p = 0.2, 0.8
    expected = q + p * (q / p)
    assert reorg_probability_bound(q, 1) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("q,delta_h", [(0.5, 1), (-0.1, 1), (0.2, -1)])
def test_domain_errors(q, delta_h):
    with pytest.raises(DomainError):
        reorg_probability_bound(q, delta_h)


def test_unknown_method():
    with pytest.raises(DomainError):
        reorg_probability_bound(0.1, 3, method="exact")


def test_poisson_method_is_close_for_small_q():
    exact = reorg_probability_bound(0.1, 5)
    approx = reorg_probability_bound(0.1, 5, method="poisson")
    assert approx == pytest.approx(exact, rel=0.6)


def test_finality_strictly_increasing_in_depth():
    values = [finality_probability(0.2, d) for d in range(13)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_reorg_bound_strictly_decreasing_over_grid():
    for q in (0.05, 0.1, 0.2, 0.3, 0.45):
        values = [reorg_probability_bound(q, d) for d in range(21)]
        assert all(b < a for a, b in zip(values, values[1:]))


def test_races_agree_with_bound():
    result = simulate_reorg_races(0.1, 6, 100000, seed=42)
    bound = reorg_probability_bound(0.1, 6)
    se = math.sqrt(bound * (1 - bound) / result.races)
    assert abs(result.frequency - bound) <= 4 * se


def test_races_are_seeded():
    a = simulate_reorg_races(0.3, 3, 5000, seed=1)
    b = simulate_reorg_races(0.3, 3, 5000, seed=1)
    assert a == b


def test_race_edge_cases():
    assert simulate_reorg_races(0.3, 0, 10, seed=0).reversals == 10
    assert simulate_reorg_races(0.0, 2, 10, seed=0).reversals == 0
    with pytest.raises(DomainError):
        simulate_reorg_races(0.3, 2, 0, seed=0)


def test_fit_recovers_exact_rate():
    points = [(d, math.exp(-0.5 * d)) for d in range(1, 8)]
    fit = fit_inertia_rate(points)
    assert fit.rate == pytest.approx(0.5, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_drops_zero_frequencies():
    points = [(d, math.exp(-0.3 * d)) for d in range(1, 6)] + [(6, 0.0)]
    fit = fit_inertia_rate(points)
    assert fit.dropped == 1
    assert fit.rate == pytest.approx(0.3, abs=1e-9)


@pytest.mark.parametrize(
    "points",
    [[(1, 0.1), (2, 0.1), (3, 0.1)], [(1, 0.5), (2, 0.2)], [(2, 0.5), (2, 0.2), (2, 0.1)]],
)
def test_fit_degenerate_data(points):
    with pytest.raises(DegenerateDataError):
        fit_inertia_rate(points)


def test_fit_on_races_decays():
    data = [(d, simulate_reorg_races(0.2, d, 20000, seed=3).frequency) for d in range(1, 7)]
    fit = fit_inertia_rate(data)
    assert fit.rate > 0
    assert fit.r_squared >= 0.95
    assert fit.predict(12) < fit.predict(6)
