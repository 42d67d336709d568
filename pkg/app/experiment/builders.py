from contextlib import contextmanager
from typing import Iterator, Optional

from pydantic import ValidationError

from app.engine.config import SimConfig
from app.exceptions import ConfigError, InvalidParameterError, UnknownNodeError
from app.experiment.config import ExperimentConfig, TopologySettings
from app.policy.space import PolicyKernel, PolicySpace
from app.schema import NodeRole
from app.topology.generator import assign_roles, attach_to_miners, generate_watts_strogatz
from app.topology.graph import NetworkGraph


@contextmanager
def config_errors(what: str) -> Iterator[None]:
    """Report parameters the builders reject as configuration errors."""
    try:
        yield
    except (ValidationError, InvalidParameterError, UnknownNodeError) as e:
        raise ConfigError(f"cannot build {what}: {e}") from e


def build_graph(
    topology: TopologySettings,
    seed: int,
    n: Optional[int] = None,
    lat_min: Optional[int] = None,
    lat_max: Optional[int] = None,
) -> NetworkGraph:
    """Watts-Strogatz graph with roles assigned and, optionally, SPV clients peered to miners."""
    with config_errors("topology"):
        graph = generate_watts_strogatz(
            n or topology.n,
            topology.k,
            topology.beta,
            seed,
            lat_min=lat_min or topology.lat_min,
            lat_max=lat_max or topology.lat_max,
        )
        graph = assign_roles(
            graph, topology.miner_count, topology.spv_fraction, topology.core_extra_edges, seed
        )
        if topology.attach_spv_to_miners:
            graph = attach_to_miners(graph, graph.nodes_with_role(NodeRole.SPV), seed)
    return graph


def policy_space(config: ExperimentConfig) -> PolicySpace:
    return PolicySpace(
        cardinality=config.policy.cardinality, canonical_policy=config.policy.canonical_policy
    )


def policy_kernel(config: ExperimentConfig) -> PolicyKernel:
    return PolicyKernel(
        drift_rate=config.policy.drift_rate, adoption_rule=config.policy.adoption_rule
    )


def build_sim_config(config: ExperimentConfig, graph: NetworkGraph, seed: int, **overrides) -> SimConfig:
    sim = config.simulation
    adversary = config.adversary.model_copy(update={"seed": seed})
    values = dict(
        graph=graph,
        ticks=sim.ticks,
        block_rate=sim.block_rate,
        kernel=policy_kernel(config),
        space=policy_space(config),
        adversary=adversary,
        seed=seed,
        hfn_validation_delay=sim.hfn_validation_delay,
        hfn_relay_rejected=sim.hfn_relay_rejected,
        spv_relay=sim.spv_relay,
        quiet_tail=sim.quiet_tail,
        txs_per_block=sim.txs_per_block,
        initial_policy_mismatch=sim.initial_policy_mismatch,
    )
    values.update(overrides)
    with config_errors("simulation"):
        return SimConfig(**values)
