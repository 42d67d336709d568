import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from app.config import config as settings
from app.experiment.base import Row
from app.experiment.bundle import ResultBundle
from app.experiment.config import ExperimentConfig, config_hash
from app.experiment.factory import ExperimentFactory
from app.logger import logger


def _replicate(job: Tuple[Dict[str, Any], int, int, Optional[str]]) -> Tuple[int, List[Row]]:
    """Worker entry point; rebuilds the experiment from plain data in the child process."""
    data, index, seed, trace_dir = job
    experiment = ExperimentFactory.create(ExperimentConfig.model_validate(data))
    return index, experiment.replicate(index, seed, Path(trace_dir) if trace_dir else None)


def run_experiment(
    config: ExperimentConfig,
    workers: Optional[int] = None,
    trace_dir: Optional[Path] = None,
) -> ResultBundle:
    """Run every replication (seed base_seed + i) and evaluate the kind's criteria.

    Rows are gathered per replication and concatenated in replication order,
    so the bundle does not depend on worker scheduling.
    """
    experiment = ExperimentFactory.create(config)
    section = config.experiment
    workers = max(1, workers or settings.workers)
    data = config.model_dump(mode="json")
    if trace_dir is not None:
        trace_dir.mkdir(parents=True, exist_ok=True)
    jobs = [
        (data, i, section.base_seed + i, str(trace_dir) if trace_dir else None)
        for i in range(section.replications)
    ]

    logger.info(
        f"Running {config.kind.value}: {section.replications} replication(s), "
        f"base_seed={section.base_seed}, workers={workers}"
    )
    start_time = time.time()
    if workers == 1 or len(jobs) == 1:
        results = [_replicate(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replicate, jobs))
    results.sort(key=lambda item: item[0])
    rows = [row for _, batch in results for row in batch]
    logger.info(f"{config.kind.value} finished in {time.time() - start_time:.2f} seconds")

    summary = experiment.summarize(rows)
    verdicts = experiment.evaluate(rows, summary, config.acceptance)
    for verdict in verdicts:
        (logger.info if verdict else logger.warning)(str(verdict))
    return ResultBundle(
        kind=config.kind,
        config=data,
        config_hash=config_hash(config),
        base_seed=section.base_seed,
        replications=section.replications,
        rows=rows,
        aggregates=summary,
        acceptance=verdicts,
    )
