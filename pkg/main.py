import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from app.config import config as settings
from app.engine.export import write_trace_csv
from app.engine.simulator import run_simulation
from app.exceptions import AcceptanceFailure, ConfigError, PowSimError
from app.experiment import (
    config_hash,
    load_experiment_config,
    read_bundle,
    run_experiment,
    verify_acceptance,
    write_bundle,
)
from app.experiment.builders import build_graph, build_sim_config
from app.experiment.bundle import TRACES_DIR, write_acceptance
from app.logger import define_log_level, logger
from app.topology import write_graph

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_ACCEPTANCE = 3


def _out_dir(args: argparse.Namespace, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return settings.root_path / settings.out_dir / default_name


def generate_graph(args: argparse.Namespace) -> int:
    experiment = load_experiment_config(args.config, args.seed)
    seed = experiment.experiment.base_seed
    graph = build_graph(experiment.topology, seed)
    out = _out_dir(args, f"graph_{seed}")
    path = write_graph(graph, out / "graph.txt")
    logger.info(
        f"Wrote graph with {graph.node_count} nodes, {len(graph.edges)} edges, "
        f"{len(graph.miners)} miners to {path}"
    )
    return EXIT_OK


def simulate(args: argparse.Namespace) -> int:
    experiment = load_experiment_config(args.config, args.seed)
    seed = experiment.experiment.base_seed
    graph = build_graph(experiment.topology, seed)
    trace = run_simulation(build_sim_config(experiment, graph, seed), config_hash(experiment))
    out = _out_dir(args, f"simulate_{seed}")
    path = write_trace_csv(trace, out / "trace.csv")
    final = trace.frame()
    logger.info(
        f"Global tip {final.global_tip} at tick {final.tick}; "
        f"delta_hfn={final.delta_hfn:.4f} delta_spv={final.delta_spv:.4f} "
        f"policy divergence={final.divergence:.4f}"
    )
    logger.info(f"Trace written to {path}")
    return EXIT_OK


def experiment(args: argparse.Namespace) -> int:
    config = load_experiment_config(args.config, args.seed)
    out = _out_dir(args, f"{config.kind.value}_{config.experiment.base_seed}")
    trace_dir = out / TRACES_DIR if args.traces else None
    bundle = run_experiment(config, workers=args.workers, trace_dir=trace_dir)
    write_bundle(bundle, out, config_source=Path(args.config))
    if args.assert_acceptance and not bundle.passed:
        raise AcceptanceFailure([r for r in bundle.acceptance if not r])
    return EXIT_OK


def verify(args: argparse.Namespace) -> int:
    bundle = read_bundle(args.bundle)
    report = verify_acceptance(bundle, args.criteria)
    print(report)
    write_acceptance(report.results, args.bundle)
    if args.assert_acceptance and not report:
        raise AcceptanceFailure(report.failed)
    return EXIT_OK


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        description="Seeded proof-of-work network simulator and experiment harness"
    )
    parser.add_argument("--log-level", default=None, help="Console log level (default POWSIM_LOG_LEVEL)")
    parser.add_argument("--log-file", default=None, help="Directory to mirror DEBUG logs into")
    commands = parser.add_subparsers(dest="command", required=True)

    def with_run_flags(sub: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sub.add_argument("--config", required=True, help="Experiment TOML file")
        sub.add_argument("--seed", type=int, default=None, help="Override the base seed")
        sub.add_argument("--out", default=None, help="Output directory")
        return sub

    with_run_flags(
        commands.add_parser("generate-graph", help="Build and write the configured topology")
    ).set_defaults(handler=generate_graph)
    with_run_flags(
        commands.add_parser("simulate", help="Run one simulation and write its trace")
    ).set_defaults(handler=simulate)

    run = with_run_flags(commands.add_parser("experiment", help="Run a replicated experiment"))
    run.add_argument("--assert", dest="assert_acceptance", action="store_true",
                     help="Exit with status 3 when an acceptance criterion fails")
    run.add_argument("--traces", action="store_true", help="Write per-replication traces")
    run.add_argument("--workers", type=int, default=None, help="Parallel worker processes")
    run.set_defaults(handler=experiment)

    check = commands.add_parser("verify", help="Re-check acceptance on a result directory")
    check.add_argument("bundle", help="Result directory written by 'experiment'")
    check.add_argument("--criteria", nargs="*", default=None, help="Criterion families to check")
    check.add_argument("--assert", dest="assert_acceptance", action="store_true")
    check.set_defaults(handler=verify)
    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    define_log_level(
        print_level=(args.log_level or settings.log_level).upper(),
        name="powsim",
        log_dir=args.log_file,
    )
    start_time = time.time()
    try:
        status = args.handler(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except AcceptanceFailure as e:
        logger.error(str(e))
        return EXIT_ACCEPTANCE
    except PowSimError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR
    except KeyboardInterrupt:
        logger.warning("Operation interrupted.")
        return EXIT_ERROR
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_ERROR
    logger.info(f"{args.command} completed in {time.time() - start_time:.2f} seconds")
    return status


if __name__ == "__main__":
    sys.exit(main())
