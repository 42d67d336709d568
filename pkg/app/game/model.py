from typing import Dict, Optional

from pydantic import BaseModel, Field, model_validator

from app.schema import NodeRole, Strategy


class UtilityParams(BaseModel):
    """Payoff constants of the validation game"""

    U0: float = Field(10.0, description="Baseline utility")
    C_cpu: float = Field(2.0, ge=0.0, description="Compute cost of full validation")
    C_net: float = Field(1.0, ge=0.0, description="Bandwidth cost of full validation")
    epsilon_policy: float = Field(0.1, ge=0.0, description="Marginal policy benefit of validating")
    delta_spv: float = Field(4.0, ge=0.0, description="Convenience benefit of running SPV")
    R_miner: float = Field(5.0, ge=0.0, description="Enforcement reward (and penalty) for miners")

    model_config = {"extra": "forbid"}

    @property
    def validation_cost(self) -> float:
        return self.C_cpu + self.C_net


class StrategyProfile(BaseModel):
    """A strategy for every node, plus the node roles"""

    assignment: Dict[int, Strategy]
    roles: Dict[int, NodeRole]

    @model_validator(mode="after")
    def _total(self) -> "StrategyProfile":
        if set(self.assignment) != set(self.roles):
            raise ValueError("assignment and roles must cover the same nodes")
        return self

    def with_strategy(self, node: int, strategy: Strategy) -> "StrategyProfile":
        assignment = dict(self.assignment)
        assignment[node] = strategy
        return StrategyProfile(assignment=assignment, roles=self.roles)

    def is_miner(self, node: int) -> bool:
        return self.roles[node] == NodeRole.MINER


class NashCheck(BaseModel):
    """Equilibrium verdict with one improving deviation when there is one"""

    is_equilibrium: bool
    witness_node: Optional[int] = None
    witness_strategy: Optional[Strategy] = None

    def __bool__(self):
        return self.is_equilibrium

    def __str__(self):
        if self.is_equilibrium:
            return "Nash equilibrium"
        return f"not an equilibrium: node {self.witness_node} improves with {self.witness_strategy.value}"


class DynamicsResult(BaseModel):
    profile: StrategyProfile
    rounds: int
    converged: bool
