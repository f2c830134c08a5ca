"""JSON summaries and CSV tables for every command and experiment run.

JSON floats use the shortest round-trip repr (pydantic's serializer); CSV
floats are written with 17 significant digits so tables are byte-stable.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Literal, Sequence, TypeVar

from pydantic import BaseModel

from reithom import logger
from reithom.errors import DataError, ReportIOError

ReportFormat = Literal["json", "csv"]
M = TypeVar("M", bound=BaseModel)


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _columns(rows: Sequence[BaseModel], row_model: type[BaseModel] | None) -> list[str]:
    if row_model is not None:
        return list(row_model.model_fields)
    if rows:
        return list(type(rows[0]).model_fields)
    raise DataError("an empty CSV report needs its row model for the header")


def write_csv(
    path: str | Path,
    rows: Sequence[BaseModel],
    row_model: type[BaseModel] | None = None,
    columns: list[str] | None = None,
) -> Path:
    """One line per row in model field order; header only when ``rows`` is empty."""
    path = Path(path)
    header = columns or _columns(rows, row_model)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                data = row.model_dump()
                writer.writerow([format_cell(data.get(name)) for name in header])
    except OSError as e:
        raise ReportIOError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(rows)} row(s) to {path}")
    return path


def write_json(path: str | Path, report: BaseModel) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote report to {path}")
    return path


def read_json(path: str | Path, model: type[M]) -> M:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"cannot read {path}: {e}") from e
    return model.model_validate_json(text)


def emit_report(
    results: BaseModel | Sequence[BaseModel],
    fmt: ReportFormat,
    path: str | Path,
    row_model: type[BaseModel] | None = None,
) -> Path:
    """Write ``results`` as a JSON summary or as CSV rows.

    JSON takes a single report model. CSV takes a sequence of row models;
    ``row_model`` supplies the header when the sequence is empty.
    """
    if fmt == "json":
        if not isinstance(results, BaseModel):
            raise DataError("a JSON report is a single model")
        return write_json(path, results)
    if fmt == "csv":
        rows = [results] if isinstance(results, BaseModel) else list(results)
        return write_csv(path, rows, row_model)
    raise DataError(f"unknown report format '{fmt}'")
