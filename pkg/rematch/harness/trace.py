"""Ratio policy and lossless CSV / JSONL trace files."""

import csv
import json
import logging
from pathlib import Path
from typing import Literal

from rematch.errors import RatioUndefinedError
from rematch.harness.dto import TRACE_COLUMNS, DynamicRow, RunTrace, TraceRow
from rematch.metrics import Distance

logger = logging.getLogger(__name__)

TraceFormat = Literal["csv", "jsonl"]


def compute_ratio(alg_cost: Distance, opt_cost: Distance) -> float:
    """alg / opt; 0 when both are 0."""
    if opt_cost == 0:
        if alg_cost == 0:
            return 0.0
        raise RatioUndefinedError(f"optimum is 0 while the algorithm pays {alg_cost}")
    return alg_cost / opt_cost


def _render(value: Distance) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not trace values")
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _parse(text: str) -> Distance:
    try:
        return int(text)
    except ValueError:
        return float(text)


def emit_trace(trace: RunTrace, fmt: TraceFormat, path: str | Path) -> None:
    columns = trace.columns
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in trace.rows:
                record = row.as_dict()
                writer.writerow([_render(record[c]) for c in columns])
        else:
            for row in trace.rows:
                record = row.as_dict()
                fh.write(json.dumps({c: record[c] for c in columns}, separators=(",", ":")))
                fh.write("\n")
    logger.info(f"Wrote {len(trace.rows)} trace rows to {path} ({fmt})")


def read_trace(path: str | Path, fmt: TraceFormat) -> list[TraceRow]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            records = [
                {key: _parse(value) for key, value in record.items()}
                for record in csv.DictReader(fh)
            ]
        else:
            records = [json.loads(line) for line in fh if line.strip()]

    rows: list[TraceRow] = []
    for record in records:
        if set(record) > set(TRACE_COLUMNS):
            rows.append(DynamicRow(**record))
        else:
            rows.append(TraceRow(**record))
    return rows
