from app.adversary.actions import apply_delay, eclipse, partition_edges, prepare_network
from app.adversary.config import AdversaryConfig, FaultRecord
from app.adversary.faults import evaluate_fault_records, expected_fault_surface, fault_injectability

__all__ = [
    "AdversaryConfig",
    "FaultRecord",
    "partition_edges",
    "eclipse",
    "apply_delay",
    "prepare_network",
    "fault_injectability",
    "expected_fault_surface",
    "evaluate_fault_records",
]
