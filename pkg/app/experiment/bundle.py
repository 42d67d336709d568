import csv
import json
import shutil
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from app import __version__
from app.exceptions import ConfigError
from app.experiment.base import CriterionResult, Row
from app.logger import logger
from app.schema import ExperimentKind

ROWS_FILE = "replications.csv"
SUMMARY_FILE = "summary.json"
CONFIG_FILE = "config.toml"
ACCEPTANCE_FILE = "acceptance.txt"
TRACES_DIR = "traces"


class ResultBundle(BaseModel):
    """Per-replication rows plus the aggregates computed from them"""

    kind: ExperimentKind
    config: Dict[str, Any] = Field(..., description="Validated experiment config as plain data")
    config_hash: str
    tool_version: str = __version__
    base_seed: int
    replications: int
    rows: List[Row] = Field(default_factory=list)
    aggregates: Dict[str, Any] = Field(default_factory=dict)
    acceptance: List[CriterionResult] = Field(default_factory=list)

    @property
    def columns(self) -> List[str]:
        columns: List[str] = []
        for row in self.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        return columns

    @property
    def passed(self) -> bool:
        return all(self.acceptance)


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return "" if value is None else str(value)


def _parse_cell(text: str) -> Any:
    if text == "":
        return None
    if text in ("True", "False"):
        return text == "True"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def normalize(data: Any) -> Any:
    """The value as it reads back from JSON."""
    return json.loads(json.dumps(data, sort_keys=True, default=float))


def rows_csv(bundle: ResultBundle) -> str:
    lines = [f"# kind={bundle.kind.value} config_hash={bundle.config_hash} base_seed={bundle.base_seed}"]
    columns = bundle.columns
    lines.append(",".join(columns))
    for row in bundle.rows:
        lines.append(",".join(_cell(row.get(c)) for c in columns))
    return "\n".join(lines) + "\n"


def write_bundle(
    bundle: ResultBundle, out_dir: Union[str, Path], config_source: Optional[Path] = None
) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / ROWS_FILE).write_text(rows_csv(bundle), encoding="utf-8")
    summary = {
        "kind": bundle.kind.value,
        "config_hash": bundle.config_hash,
        "tool_version": bundle.tool_version,
        "base_seed": bundle.base_seed,
        "replications": bundle.replications,
        "aggregates": bundle.aggregates,
        "config": bundle.config,
    }
    (out / SUMMARY_FILE).write_text(
        json.dumps(normalize(summary), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if config_source is not None:
        shutil.copyfile(config_source, out / CONFIG_FILE)
    if bundle.acceptance:
        write_acceptance(bundle.acceptance, out)
    logger.info(f"Wrote {len(bundle.rows)} rows for {bundle.kind.value} to {out}")
    return out


def write_acceptance(results: List[CriterionResult], out_dir: Union[str, Path]) -> Path:
    path = Path(out_dir) / ACCEPTANCE_FILE
    verdict = "PASS" if all(results) else "FAIL"
    lines = [str(r) for r in results] + [f"overall: {verdict}"]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_bundle(out_dir: Union[str, Path]) -> ResultBundle:
    """Load a bundle written by ``write_bundle`` (acceptance verdicts are not read back)."""
    out = Path(out_dir)
    try:
        summary = json.loads((out / SUMMARY_FILE).read_text(encoding="utf-8"))
        with (out / ROWS_FILE).open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(line for line in fh if not line.startswith("#"))
            rows = [{k: _parse_cell(v) for k, v in row.items()} for row in reader]
    except FileNotFoundError as e:
        raise ConfigError(f"{out} is not a result bundle: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{out / SUMMARY_FILE}: {e}") from e
    return ResultBundle(
        kind=summary["kind"],
        config=summary["config"],
        config_hash=summary["config_hash"],
        tool_version=summary["tool_version"],
        base_seed=summary["base_seed"],
        replications=summary["replications"],
        rows=rows,
        aggregates=summary["aggregates"],
    )
