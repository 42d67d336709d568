from enum import Enum
from typing import Literal


class NodeRole(str, Enum):
    """Node class options"""

    MINER = "miner"
    HFN = "hfn"
    SPV = "spv"


ROLE_VALUES = tuple(role.value for role in NodeRole)
ROLE_TYPE = Literal[ROLE_VALUES]  # type: ignore


class Strategy(str, Enum):
    """Validation strategies of the validation game"""

    SPV = "spv"
    FULL_VALIDATE = "full_validate"
    NO_VALIDATION = "no_validation"


# best_response tie order, strongest first
STRATEGY_TIE_ORDER = (Strategy.SPV, Strategy.FULL_VALIDATE, Strategy.NO_VALIDATION)


class AdoptionRule(str, Enum):
    """How a node adopts a policy from its inbox"""

    MAJORITY_OF_INBOX = "majority_of_inbox"
    UNIFORM_RANDOM_PEER = "uniform_random_peer"


class MessageKind(str, Enum):
    """Adversarial message kinds recorded in fault records"""

    INVALID_BLOCK = "invalid_block"
    STALE_CHAIN = "stale_chain"
    FORGED_HEADER_SEQUENCE = "forged_header_sequence"


class TxClass(str, Enum):
    """Transaction classes used by surplus accounting"""

    T1_STANDARD = "T1_standard"
    T2_METADATA = "T2_metadata"
    T3_MALFORMED = "T3_malformed"
    T4_ORPHANED = "T4_orphaned"


class EventKind(str, Enum):
    """Trace event kinds"""

    PRODUCE = "produce"
    ADOPT = "adopt"
    REJECT = "reject"
    REORG = "reorg"
    FAULT = "fault"
    METRICS = "metrics"


class ExperimentKind(str, Enum):
    """Experiment kinds the runner knows how to execute"""

    PARTITION_DIVERGENCE = "partition_divergence"
    REORG_DECAY = "reorg_decay"
    POLICY_DIVERGENCE = "policy_divergence"
    EQUILIBRIUM = "equilibrium"
    SURPLUS = "surplus"
    TOPOLOGY_CLAIMS = "topology_claims"
    FINALITY_MONOTONICITY = "finality_monotonicity"
    SPV_BASELINE = "spv_baseline"
    ENFORCEMENT_INERTNESS = "enforcement_inertness"
    LATENCY_DIVERGENCE = "latency_divergence"


class Divergent(str, Enum):
    """Marker returned when a ratio has a zero denominator"""

    DIVERGENT = "divergent"
