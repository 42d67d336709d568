import itertools
from typing import Dict, List

import yaml

from app.exceptions import InvalidParameterError, UnknownNodeError
from app.game.model import DynamicsResult, NashCheck, StrategyProfile, UtilityParams
from app.logger import logger
from app.rng import PROFILES, make_rng
from app.schema import STRATEGY_TIE_ORDER, NodeRole, Strategy

MAX_ENUMERATION_NODES = 10


def utility(node: int, strategy: Strategy, profile: StrategyProfile, params: UtilityParams) -> float:
    """Payoff of ``node`` playing ``strategy``; other nodes' strategies do not enter."""
    if node not in profile.assignment:
        raise UnknownNodeError(node)
    if profile.is_miner(node):
        if strategy == Strategy.FULL_VALIDATE:
            return params.U0 + params.R_miner - params.C_cpu - params.C_net
        return params.U0 - params.R_miner
    if strategy == Strategy.FULL_VALIDATE:
        return params.U0 - params.C_cpu - params.C_net + params.epsilon_policy
    if strategy == Strategy.SPV:
        return params.U0 + params.delta_spv
    return params.U0


def best_response(node: int, profile: StrategyProfile, params: UtilityParams) -> Strategy:
    """Highest-utility strategy; ties go SPV, then FullValidate, then NoValidation."""
    best = None
    best_value = None
    for strategy in STRATEGY_TIE_ORDER:
        value = utility(node, strategy, profile, params)
        if best_value is None or value > best_value:
            best, best_value = strategy, value
    return best


def is_nash_equilibrium(profile: StrategyProfile, params: UtilityParams) -> NashCheck:
    for node in sorted(profile.assignment):
        current = utility(node, profile.assignment[node], profile, params)
        better = best_response(node, profile, params)
        if utility(node, better, profile, params) > current:
            return NashCheck(is_equilibrium=False, witness_node=node, witness_strategy=better)
    return NashCheck(is_equilibrium=True)


def run_best_response_dynamics(
    initial: StrategyProfile,
    params: UtilityParams,
    max_rounds: int,
    sequential: bool = False,
) -> DynamicsResult:
    """Best-response rounds until a round changes nothing or max_rounds pass.

    Synchronous rounds answer the previous round's profile; sequential rounds
    update nodes one at a time in id order. The unchanged round is counted.
    """
    if max_rounds < 1:
        raise InvalidParameterError(f"max_rounds must be >= 1, got {max_rounds}")
    profile = initial
    for round_number in range(1, max_rounds + 1):
        if sequential:
            updated = profile
            for node in sorted(profile.assignment):
                updated = updated.with_strategy(node, best_response(node, updated, params))
        else:
            assignment = {
                node: best_response(node, profile, params) for node in sorted(profile.assignment)
            }
            updated = StrategyProfile(assignment=assignment, roles=profile.roles)
        if updated.assignment == profile.assignment:
            return DynamicsResult(profile=profile, rounds=round_number, converged=True)
        profile = updated
    return DynamicsResult(profile=profile, rounds=max_rounds, converged=False)


def canonical_profile(roles: Dict[int, NodeRole]) -> StrategyProfile:
    """Miners fully validate, everyone else runs SPV."""
    return StrategyProfile(
        assignment={
            node: Strategy.FULL_VALIDATE if role == NodeRole.MINER else Strategy.SPV
            for node, role in roles.items()
        },
        roles=roles,
    )


def random_profile(roles: Dict[int, NodeRole], seed: int) -> StrategyProfile:
    rng = make_rng(seed, PROFILES)
    strategies = list(Strategy)
    picks = rng.integers(len(strategies), size=len(roles))
    return StrategyProfile(
        assignment={node: strategies[int(p)] for node, p in zip(sorted(roles), picks)},
        roles=roles,
    )


def enumerate_equilibria(roles: Dict[int, NodeRole], params: UtilityParams) -> List[StrategyProfile]:
    """Every pure-strategy Nash equilibrium, by brute force."""
    if len(roles) > MAX_ENUMERATION_NODES:
        raise InvalidParameterError(
            f"exhaustive enumeration is limited to {MAX_ENUMERATION_NODES} nodes, got {len(roles)}"
        )
    nodes = sorted(roles)
    found = []
    for combo in itertools.product(list(Strategy), repeat=len(nodes)):
        profile = StrategyProfile(assignment=dict(zip(nodes, combo)), roles=roles)
        if is_nash_equilibrium(profile, params):
            found.append(profile)
    return found


def in_spv_dominance_regime(params: UtilityParams, warn: bool = True) -> bool:
    """SPV convenience outweighs validation cost and the policy benefit stays below the gap."""
    gap = params.delta_spv - params.validation_cost
    ok = gap > 0 and params.epsilon_policy < gap
    if not ok and warn:
        logger.warning(
            f"UtilityParams outside the SPV-dominance regime: delta_spv={params.delta_spv}, "
            f"C_cpu+C_net={params.validation_cost}, epsilon_policy={params.epsilon_policy}"
        )
    return ok


def miners_enforce(params: UtilityParams) -> bool:
    """Full validation is a miner's best response."""
    return params.R_miner - params.validation_cost > -params.R_miner


def equilibrium_report(profile: StrategyProfile, params: UtilityParams) -> str:
    """YAML report: verdict, witness deviation, and per-node utilities."""
    check = is_nash_equilibrium(profile, params)
    nodes = []
    for node in sorted(profile.assignment):
        strategy = profile.assignment[node]
        response = best_response(node, profile, params)
        nodes.append(
            {
                "node": node,
                "role": profile.roles[node].value,
                "strategy": strategy.value,
                "utility": utility(node, strategy, profile, params),
                "best_response": response.value,
                "best_utility": utility(node, response, profile, params),
            }
        )
    report = {
        "is_nash_equilibrium": check.is_equilibrium,
        "witness": None
        if check.is_equilibrium
        else {"node": check.witness_node, "strategy": check.witness_strategy.value},
        "in_spv_dominance_regime": in_spv_dominance_regime(params, warn=False),
        "params": params.model_dump(),
        "nodes": nodes,
    }
    return yaml.safe_dump(report, sort_keys=False)
