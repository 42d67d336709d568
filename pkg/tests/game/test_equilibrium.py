import pytest
import yaml
from pydantic import ValidationError

from app.exceptions import InvalidParameterError, UnknownNodeError
from app.game.equilibrium import (
    best_response,
    canonical_profile,
    enumerate_equilibria,
    equilibrium_report,
    in_spv_dominance_regime,
    is_nash_equilibrium,
    miners_enforce,
    random_profile,
    run_best_response_dynamics,
    utility,
)
from app.game.model import StrategyProfile, UtilityParams
from app.schema import NodeRole, Strategy

ROLES = {0: NodeRole.MINER, 1: NodeRole.HFN, 2: NodeRole.SPV}


@pytest.fixture
def params():
    return UtilityParams()


def _uniform(strategy):
    return StrategyProfile(assignment={n: strategy for n in ROLES}, roles=ROLES)


def test_reference_utilities(params):
    profile = canonical_profile(ROLES)
    assert utility(1, Strategy.FULL_VALIDATE, profile, params) == pytest.approx(7.1)
    assert utility(1, Strategy.SPV, profile, params) == pytest.approx(14.0)
    assert utility(1, Strategy.NO_VALIDATION, profile, params) == pytest.approx(10.0)
    assert utility(0, Strategy.FULL_VALIDATE, profile, params) == pytest.approx(12.0)
    assert utility(0, Strategy.SPV, profile, params) == pytest.approx(5.0)
    with pytest.raises(UnknownNodeError):
        utility(9, Strategy.SPV, profile, params)


def test_best_responses(params):
    profile = canonical_profile(ROLES)
    assert best_response(0, profile, params) == Strategy.FULL_VALIDATE
    assert best_response(1, profile, params) == Strategy.SPV
    assert best_response(2, profile, params) == Strategy.SPV


def test_tie_goes_to_spv():
    tied = UtilityParams(delta_spv=0.0, C_cpu=0.0, C_net=0.0, epsilon_policy=0.0)
    assert best_response(1, canonical_profile(ROLES), tied) == Strategy.SPV


def test_canonical_profile_is_nash(params):
    check = is_nash_equilibrium(canonical_profile(ROLES), params)
    assert check
    assert str(check) == "Nash equilibrium"


def test_all_full_validation_has_a_witness(params):
    check = is_nash_equilibrium(_uniform(Strategy.FULL_VALIDATE), params)
    assert not check
    assert check.witness_node == 1
    assert check.witness_strategy == Strategy.SPV
    assert "node 1" in str(check)


def test_dynamics_from_no_validation(params):
    result = run_best_response_dynamics(_uniform(Strategy.NO_VALIDATION), params, max_rounds=10)
    assert result.converged
    assert result.rounds == 2
    assert result.profile.assignment == canonical_profile(ROLES).assignment

    sequential = run_best_response_dynamics(
        _uniform(Strategy.NO_VALIDATION), params, max_rounds=10, sequential=True
    )
    assert sequential.profile.assignment == result.profile.assignment


def test_dynamics_round_limit(params):
    result = run_best_response_dynamics(_uniform(Strategy.NO_VALIDATION), params, max_rounds=1)
    assert not result.converged
    assert result.rounds == 1
    with pytest.raises(InvalidParameterError):
        run_best_response_dynamics(_uniform(Strategy.SPV), params, max_rounds=0)


def test_random_profile_is_seeded():
    roles = {i: NodeRole.HFN for i in range(12)}
    assert random_profile(roles, 4).assignment == random_profile(roles, 4).assignment


def test_enumeration_finds_only_the_canonical_profile(params):
    found = enumerate_equilibria(ROLES, params)
    assert [p.assignment for p in found] == [canonical_profile(ROLES).assignment]
    with pytest.raises(InvalidParameterError):
        enumerate_equilibria({i: NodeRole.HFN for i in range(11)}, params)


def test_regime_checks(params):
    assert in_spv_dominance_regime(params)
    assert miners_enforce(params)
    assert not in_spv_dominance_regime(UtilityParams(delta_spv=2.0), warn=False)
    assert not miners_enforce(UtilityParams(R_miner=1.0))


def test_params_reject_unknown_fields():
    with pytest.raises(ValidationError):
        UtilityParams(bonus=1.0)
    with pytest.raises(ValidationError):
        StrategyProfile(assignment={0: Strategy.SPV}, roles=ROLES)


def test_report_lists_every_node(params):
    report = yaml.safe_load(equilibrium_report(_uniform(Strategy.SPV), params))
    assert report["is_nash_equilibrium"] is False
    assert report["witness"] == {"node": 0, "strategy": "full_validate"}
    assert [n["node"] for n in report["nodes"]] == [0, 1, 2]
    assert report["nodes"][1]["utility"] == pytest.approx(14.0)
