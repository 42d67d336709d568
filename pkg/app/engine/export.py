import csv
import hashlib
import io
from pathlib import Path
from typing import List, Optional, Union

from app.engine.trace import SimTrace
from app.schema import EventKind

TRACE_COLUMNS = [
    "tick",
    "event_kind",
    "node_id",
    "block_id",
    "parent_id",
    "height",
    "producer",
    "consensus_valid",
    "policy",
    "delta_i",
    "D",
    "delta_spv",
    "delta_hfn",
    "kind",
    "caused_deviation",
]


def _row(tick, kind: EventKind, **values) -> List:
    row = {column: "" for column in TRACE_COLUMNS}
    row["tick"] = tick
    row["event_kind"] = kind.value
    row.update(values)
    return [row[column] for column in TRACE_COLUMNS]


def _block_fields(trace: SimTrace, block_id: int) -> dict:
    block = trace.tree[block_id]
    return {
        "block_id": block_id,
        "parent_id": "" if block.parent_id is None else block.parent_id,
        "height": block.height,
        "producer": "" if block.producer is None else block.producer,
        "consensus_valid": int(block.consensus_valid),
        "policy": block.policy_tag,
    }


def trace_rows(trace: SimTrace) -> List[List]:
    """Trace events in (tick, kind, node) order, one metrics row per tick."""
    events = []
    order = {kind: i for i, kind in enumerate(EventKind)}
    for block in trace.tree.blocks.values():
        if block.is_genesis:
            continue
        events.append(
            (block.tick, order[EventKind.PRODUCE], block.producer, block.block_id,
             _row(block.tick, EventKind.PRODUCE, node_id=block.producer, **_block_fields(trace, block.block_id)))
        )
    for a in trace.adoptions:
        frame = trace.frames[a.tick]
        events.append(
            (a.tick, order[EventKind.ADOPT], a.node, a.block_id,
             _row(a.tick, EventKind.ADOPT, node_id=a.node, delta_i=int(frame.deltas[a.node]),
                  **_block_fields(trace, a.block_id)))
        )
    for r in trace.rejections:
        events.append(
            (r.tick, order[EventKind.REJECT], r.node, r.block_id,
             _row(r.tick, EventKind.REJECT, node_id=r.node, **_block_fields(trace, r.block_id)))
        )
    for e in trace.reorg_events:
        events.append(
            (e.tick, order[EventKind.REORG], -1, e.new_tip,
             _row(e.tick, EventKind.REORG, **_block_fields(trace, e.new_tip)))
        )
    for f in trace.fault_records:
        events.append(
            (f.tick, order[EventKind.FAULT], f.target, f.block_id if f.block_id is not None else -1,
             _row(f.tick, EventKind.FAULT, node_id=f.target,
                  block_id="" if f.block_id is None else f.block_id,
                  kind=f.message_kind.value, caused_deviation=int(bool(f.caused_deviation))))
        )
    for frame in trace.frames:
        events.append(
            (frame.tick, order[EventKind.METRICS], -1, frame.global_tip,
             _row(frame.tick, EventKind.METRICS, block_id=frame.global_tip,
                  D=repr(frame.divergence), delta_spv=repr(frame.delta_spv),
                  delta_hfn=repr(frame.delta_hfn)))
        )
    events.sort(key=lambda e: (e[0], e[1], e[2], e[3]))
    return [e[4] for e in events]


def trace_header(trace: SimTrace) -> str:
    return f"# config_hash={trace.config_hash} seed={trace.seed}"


def trace_csv(trace: SimTrace) -> str:
    buffer = io.StringIO()
    buffer.write(trace_header(trace) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    writer.writerows(trace_rows(trace))
    return buffer.getvalue()


def write_trace_csv(trace: SimTrace, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(trace_csv(trace), encoding="utf-8")
    return path


def trace_digest(trace: SimTrace, body_only: Optional[bool] = True) -> str:
    """SHA-256 of the serialized trace; the header line is skipped by default."""
    text = trace_csv(trace)
    if body_only:
        text = text.split("\n", 1)[1]
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
