from app.policy.divergence import divergence_lower_bound, divergence_metric
from app.policy.dynamics import PolicyDynamics, redundant_nodes, write_policy_trajectories
from app.policy.entropy import empirical_entropy, policy_entropy, redundant_entropy
from app.policy.kernel import (
    estimate_mismatch_p,
    isolated_marginals,
    step_policy,
    uniform_drift_matrix,
)
from app.policy.space import PolicyKernel, PolicySpace, PolicyVector

__all__ = [
    "PolicySpace",
    "PolicyKernel",
    "PolicyVector",
    "step_policy",
    "uniform_drift_matrix",
    "isolated_marginals",
    "estimate_mismatch_p",
    "policy_entropy",
    "empirical_entropy",
    "redundant_entropy",
    "divergence_metric",
    "divergence_lower_bound",
    "PolicyDynamics",
    "redundant_nodes",
    "write_policy_trajectories",
]
