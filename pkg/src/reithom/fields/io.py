"""Field persistence: flat little-endian float64 binary plus a JSON sidecar."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from reithom import logger
from reithom.errors import DataError, ReportIOError
from reithom.fields.periodic import Cells, PeriodicField

DTYPE = np.dtype("<f8")


class FieldSidecar(BaseModel):
    """JSON metadata stored next to a ``.bin`` sample array."""

    cells: Cells = Field(description="Cell(s) the field is sampled on.")
    resolution: list[int] = Field(description="Points per period per grid axis.")
    components: list[int] = Field(
        default_factory=list, description="Trailing component shape (empty for scalars)."
    )
    length: float = Field(1.0, description="Macro box side for Omega x Y x Z fields.")
    extra: dict = Field(
        default_factory=dict, description="Caller metadata (e.g. HomTable lattice)."
    )


def sidecar_paths(path: str | Path) -> tuple[Path, Path]:
    """``(<base>.bin, <base>.json)`` for a path given with or without suffix."""
    base = Path(path)
    if base.suffix in (".bin", ".json"):
        base = base.with_suffix("")
    return base.with_suffix(".bin"), base.with_suffix(".json")


def write_binary(path: Path, arrays: list[np.ndarray]) -> None:
    """Concatenate arrays row-major as little-endian float64."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        for arr in arrays:
            np.ascontiguousarray(arr, dtype=DTYPE).tofile(f)


def read_binary(path: Path, shapes: list[tuple[int, ...]]) -> list[np.ndarray]:
    """Split a flat float64 file back into arrays of the given shapes."""
    flat = np.fromfile(path, dtype=DTYPE)
    sizes = [int(np.prod(s)) for s in shapes]
    if flat.size != sum(sizes):
        raise DataError(f"{path} holds {flat.size} values, expected {sum(sizes)} for {shapes}")
    out, start = [], 0
    for shape, size in zip(shapes, sizes):
        out.append(flat[start : start + size].reshape(shape))
        start += size
    return out


def save_field(field: PeriodicField, path: str | Path, extra: dict | None = None) -> Path:
    """Write ``<path>.bin`` (row-major) and ``<path>.json``; returns the sidecar path."""
    bin_path, json_path = sidecar_paths(path)
    sidecar = FieldSidecar(
        cells=field.cells,
        resolution=list(field.resolution),
        components=list(field.component_shape),
        length=field.length,
        extra=extra or {},
    )
    try:
        write_binary(bin_path, [field.values])
        json_path.write_text(sidecar.model_dump_json(indent=2))
    except OSError as e:
        raise ReportIOError(f"Failed to write field to {bin_path}: {e}")
    logger.debug(f"Saved {field.cells.value} field {field.values.shape} to {bin_path}")
    return json_path


def load_field(path: str | Path) -> tuple[PeriodicField, dict]:
    """Read a field written by :func:`save_field`; returns ``(field, extra)``."""
    bin_path, json_path = sidecar_paths(path)
    try:
        raw_meta = json_path.read_text()
        flat = np.fromfile(bin_path, dtype=DTYPE)
    except OSError as e:
        raise ReportIOError(f"Failed to read field from {bin_path}: {e}")
    try:
        meta = FieldSidecar.model_validate_json(raw_meta)
    except ValidationError as e:
        raise DataError(f"Malformed field sidecar {json_path}: {e}")

    shape = tuple(meta.resolution) + tuple(meta.components)
    if flat.size != int(np.prod(shape)):
        raise DataError(
            f"{bin_path} holds {flat.size} values but the sidecar declares shape {shape}"
        )
    field = PeriodicField(
        values=flat.reshape(shape),
        cells=meta.cells,
        grid_ndim=len(meta.resolution),
        length=meta.length,
    )
    return field, meta.extra


def export_csv(field: PeriodicField, path: str | Path) -> Path:
    """Write a 1-D field as ``point,value[,value_1...]`` rows."""
    if field.grid_ndim != 1:
        raise DataError(f"CSV export needs a 1-D field, got {field.grid_ndim} grid axes")
    points = field.points()[..., 0]
    values = field.values.reshape(field.resolution[0], -1)
    header = ["point"] + (
        ["value"] if values.shape[1] == 1 else [f"value_{i}" for i in range(values.shape[1])]
    )
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for x, row in zip(points, values):
                writer.writerow([f"{x:.17g}"] + [f"{v:.17g}" for v in row])
    except OSError as e:
        raise ReportIOError(f"Failed to write {target}: {e}")
    return target
