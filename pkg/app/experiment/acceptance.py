from typing import Iterable, List, Optional

from pydantic import BaseModel, ValidationError

from app.exceptions import MismatchedKindError
from app.experiment.base import CriterionResult
from app.experiment.bundle import ResultBundle, normalize
from app.experiment.config import ExperimentConfig
from app.experiment.factory import ExperimentFactory
from app.schema import ExperimentKind

RECOMPUTATION = "aggregates_recomputable"


def criterion_family(name: str) -> str:
    """``partition_ordering[p=0.1]`` belongs to ``partition_ordering``."""
    return name.split("[", 1)[0]


class AcceptanceReport(BaseModel):
    """Per-criterion verdicts for one bundle"""

    kind: ExperimentKind
    results: List[CriterionResult]

    def __bool__(self):
        return all(self.results)

    def __str__(self):
        verdict = "PASS" if self else "FAIL"
        return "\n".join([str(r) for r in self.results] + [f"overall: {verdict}"])

    @property
    def failed(self) -> List[CriterionResult]:
        return [r for r in self.results if not r]


def verify_acceptance(
    bundle: ResultBundle, criteria: Optional[Iterable[str]] = None
) -> AcceptanceReport:
    """Evaluate the kind's criteria on aggregates recomputed from the bundle's rows.

    ``criteria`` narrows the check to the named families; names the kind does
    not define, or a bundle without rows, raise MismatchedKindError.
    """
    if not bundle.rows:
        raise MismatchedKindError(f"bundle for {bundle.kind.value} has no replication rows")
    try:
        config = ExperimentConfig.model_validate(bundle.config)
    except ValidationError as e:
        raise MismatchedKindError(f"bundle config does not validate: {e}") from e
    if config.kind != bundle.kind:
        raise MismatchedKindError(
            f"bundle kind {bundle.kind.value} differs from its config kind {config.kind.value}"
        )

    experiment = ExperimentFactory.create(config)
    wanted = set(criteria) if criteria is not None else set(experiment.criteria)
    unknown = wanted - set(experiment.criteria) - {RECOMPUTATION}
    if unknown:
        raise MismatchedKindError(
            f"criteria {sorted(unknown)} do not apply to {bundle.kind.value}; "
            f"known: {experiment.criteria}"
        )

    summary = experiment.summarize(bundle.rows)
    results = [
        r
        for r in experiment.evaluate(bundle.rows, summary, config.acceptance)
        if criterion_family(r.name) in wanted
    ]
    if bundle.aggregates:
        matches = normalize(summary) == normalize(bundle.aggregates)
        results.append(
            CriterionResult(
                name=RECOMPUTATION,
                passed=matches,
                measured="stored aggregates match" if matches else "stored aggregates differ",
                expected="aggregates equal to those recomputed from the rows",
            )
        )
    return AcceptanceReport(kind=bundle.kind, results=results)
