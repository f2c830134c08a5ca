"""Tabulated homogenized densities over a rectangular xi lattice.

An ``inner`` table holds ``f_hom(y_j, xi)`` for every y sample ``y_j``; an
``outer`` table holds ``f_hom_bar(xi)`` under a single dummy sample. Every node
stores the cell energy and its xi-flux (the mean cell flux), so smooth
interpolants can be built without differencing the table.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError
from scipy.interpolate import CubicHermiteSpline, RegularGridInterpolator

from reithom import logger
from reithom.cell.models import (
    LatticeAxis,
    Level,
    coords_flux_to_tensor,
    coords_to_tensor,
    flux_to_coords,
    tensor_to_coords,
)
from reithom.errors import ContractError, DataError, ReportIOError, TableRangeError
from reithom.fields.io import read_binary, sidecar_paths, write_binary
from reithom.fields.periodic import cell_points, wrap

ProgressCallback = Callable[[int, int], None]

# Points within this fraction of a spacing from the hull count as leaving it.
EDGE_FRACTION = 0.5


@dataclass(frozen=True)
class HomTable:
    """``f_hom`` (or ``f_hom_bar``) sampled on ``y_points x lattice``.

    The arrays are filled in place while tabulating and not touched afterwards.
    """

    label: str
    level: Level
    order: int
    dims: tuple[int, int]
    axes: list[LatticeAxis]
    y_points: np.ndarray
    values: np.ndarray
    flux: np.ndarray
    converged: np.ndarray
    resolution: int
    scheme: str = "central"
    integrand_name: str = ""
    integrand_params: dict = field(default_factory=dict)

    @property
    def xi_shape(self) -> tuple[int, ...]:
        n, d = self.dims
        return (d, n) if self.order == 1 else (d, n, n)

    @property
    def lattice_shape(self) -> tuple[int, ...]:
        return tuple(a.count for a in self.axes)

    @property
    def n_coords(self) -> int:
        return len(self.axes)

    @property
    def n_y(self) -> int:
        return self.y_points.shape[0]

    @property
    def all_converged(self) -> bool:
        return bool(np.all(self.converged))

    def nodes(self) -> list[np.ndarray]:
        return [a.nodes() for a in self.axes]

    def nearest_column(self, y: np.ndarray) -> np.ndarray:
        """Index of the nearest y sample (periodic distance) for each point."""
        y = np.asarray(y, dtype=float).reshape(-1, self.dims[0])
        gap = wrap(y[:, None, :] - self.y_points[None, :, :])
        return np.argmin(np.sum(gap**2, axis=-1), axis=1)

    def outside(self, coords: np.ndarray) -> tuple[int, Literal["lo", "hi"]] | None:
        """First lattice axis and side a set of coordinates crosses or touches."""
        coords = np.asarray(coords, dtype=float).reshape(-1, self.n_coords)
        for k, axis in enumerate(self.axes):
            slack = EDGE_FRACTION * axis.spacing
            if np.any(coords[:, k] < axis.lo + slack):
                return k, "lo"
            if np.any(coords[:, k] > axis.hi - slack):
                return k, "hi"
        return None

    # -----------------------------------------------------------------------
    # y-independent density (outer tables)
    # -----------------------------------------------------------------------

    def energy(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        lead = xi.shape[: xi.ndim - len(self.xi_shape)]
        coords = tensor_to_coords(self, xi).reshape(-1, self.n_coords)
        values, _ = self.interpolant().evaluate(np.zeros(len(coords), dtype=int), coords)
        return values.reshape(lead)

    def flux_at(self, xi: np.ndarray) -> np.ndarray:
        """Interpolated xi-derivative of the y-independent density."""
        xi = np.asarray(xi, dtype=float)
        lead = xi.shape[: xi.ndim - len(self.xi_shape)]
        coords = tensor_to_coords(self, xi).reshape(-1, self.n_coords)
        _, grads = self.interpolant().evaluate(np.zeros(len(coords), dtype=int), coords)
        return coords_flux_to_tensor(self, grads).reshape(lead + self.xi_shape)

    def interpolant(self) -> "TableInterpolant":
        cached = self.__dict__.get("_interpolant")
        if cached is None:
            cached = TableInterpolant(self)
            self.__dict__["_interpolant"] = cached
        return cached


# ---------------------------------------------------------------------------
# Interpolation
# ---------------------------------------------------------------------------


class TableInterpolant:
    """C^1 interpolation in xi, one table column per query point.

    One free coordinate: cubic Hermite from stored values and fluxes. More:
    tensor cubic splines with central-difference gradients. ``+inf`` outside
    the lattice hull.
    """

    def __init__(self, table: HomTable) -> None:
        self.table = table
        self.nodes = table.nodes()
        if table.n_coords == 1:
            x = self.nodes[0]
            spline = CubicHermiteSpline(
                x, table.values.T, table.flux[..., 0].T, axis=0
            )
            self._coeffs = spline.c
            self._x = x
        else:
            method = "cubic" if min(table.lattice_shape) >= 4 else "linear"
            self._columns = [
                RegularGridInterpolator(self.nodes, table.values[j], method=method)
                for j in range(table.n_y)
            ]

    def _inside(self, coords: np.ndarray) -> np.ndarray:
        inside = np.ones(coords.shape[0], dtype=bool)
        for k, axis in enumerate(self.table.axes):
            inside &= (coords[:, k] >= axis.lo) & (coords[:, k] <= axis.hi)
        return inside

    def evaluate(
        self, columns: np.ndarray, coords: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        """Values ``(M,)`` and coordinate gradients ``(M, K)`` at ``coords``."""
        coords = np.asarray(coords, dtype=float).reshape(-1, self.table.n_coords)
        columns = np.asarray(columns, dtype=int).reshape(-1)
        inside = self._inside(coords)
        values = np.full(coords.shape[0], np.inf)
        grads = np.zeros(coords.shape)
        if not inside.any():
            return values, grads
        c, q = columns[inside], coords[inside]
        if self.table.n_coords == 1:
            t = q[:, 0]
            i = np.clip(np.searchsorted(self._x, t, side="right") - 1, 0, len(self._x) - 2)
            dt = t - self._x[i]
            k = self._coeffs[:, i, c]
            values[inside] = ((k[0] * dt + k[1]) * dt + k[2]) * dt + k[3]
            grads[inside, 0] = (3.0 * k[0] * dt + 2.0 * k[1]) * dt + k[2]
            return values, grads

        v = np.empty(len(q))
        g = np.empty(q.shape)
        for j in np.unique(c):
            mask = c == j
            interp = self._columns[j]
            pts = q[mask]
            v[mask] = interp(pts)
            for k, axis in enumerate(self.table.axes):
                h = 1e-5 * axis.spacing
                plus, minus = pts.copy(), pts.copy()
                plus[:, k] = np.minimum(pts[:, k] + h, axis.hi)
                minus[:, k] = np.maximum(pts[:, k] - h, axis.lo)
                g[mask, k] = (interp(plus) - interp(minus)) / (plus[:, k] - minus[:, k])
        values[inside] = v
        grads[inside] = g
        return values, grads


def eval_interp(table: HomTable, y, xi) -> float:
    """Multilinear interpolation in xi at the nearest y sample."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        xi = xi.reshape(table.xi_shape)
    if xi.shape != table.xi_shape:
        raise ContractError(f"xi must have shape {table.xi_shape}, got {xi.shape}")
    coords = tensor_to_coords(table, xi)
    for k, axis in enumerate(table.axes):
        if not axis.lo <= coords[k] <= axis.hi:
            raise TableRangeError(
                f"xi coordinate {k} = {coords[k]:g} outside the table range "
                f"[{axis.lo:g}, {axis.hi:g}]"
            )
    y = np.atleast_1d(np.asarray(y, dtype=float)) if table.level == "inner" else table.y_points[0]
    column = int(table.nearest_column(y)[0])
    interp = RegularGridInterpolator(table.nodes(), table.values[column], method="linear")
    return float(interp(coords[None, :])[0])


# ---------------------------------------------------------------------------
# Tabulation
# ---------------------------------------------------------------------------


def y_sample_points(y_samples: int, dim: int) -> np.ndarray:
    axis = cell_points(y_samples)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, dim)


def normalize_lattice(lattice, n_coords: int) -> list[LatticeAxis]:
    axes = list(lattice) if isinstance(lattice, (list, tuple)) else [lattice]
    if len(axes) == 1 and n_coords > 1:
        axes = axes * n_coords
    if len(axes) != n_coords:
        raise ContractError(f"lattice needs {n_coords} axes, got {len(axes)}")
    return [a if isinstance(a, LatticeAxis) else LatticeAxis.model_validate(a) for a in axes]


NodeSolver = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]


def _fill(
    table: HomTable,
    solve_node: NodeSolver,
    todo: list[tuple[int, ...]],
    jobs: int,
    on_progress: ProgressCallback | None,
) -> None:
    """Solve ``todo`` lattice nodes concurrently and write them into ``table``."""
    grids = table.nodes()
    total = len(todo)

    def work(index: tuple[int, ...]):
        coords = np.array([grids[k][i] for k, i in enumerate(index)])
        return solve_node(coords_to_tensor(table, coords))

    done = 0
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for index, (energy, flux, ok) in zip(todo, pool.map(work, todo)):
            table.values[(slice(None),) + index] = energy
            table.flux[(slice(None),) + index] = flux_to_coords(table, flux)
            table.converged[(slice(None),) + index] = ok
            done += 1
            if on_progress:
                on_progress(done, total)


def empty_table(
    label: str,
    level: Level,
    order: int,
    dims: tuple[int, int],
    axes: list[LatticeAxis],
    y_points: np.ndarray,
    resolution: int,
    scheme: str,
    integrand_name: str,
    integrand_params: dict,
) -> HomTable:
    shape = (y_points.shape[0],) + tuple(a.count for a in axes)
    return HomTable(
        label=label,
        level=level,
        order=order,
        dims=dims,
        axes=axes,
        y_points=y_points,
        values=np.full(shape, np.nan),
        flux=np.full(shape + (len(axes),), np.nan),
        converged=np.zeros(shape, dtype=bool),
        resolution=resolution,
        scheme=scheme,
        integrand_name=integrand_name,
        integrand_params=dict(integrand_params),
    )


def populate(
    table: HomTable,
    solve_node: NodeSolver,
    jobs: int = 1,
    on_progress: ProgressCallback | None = None,
) -> HomTable:
    todo = list(itertools.product(*(range(n) for n in table.lattice_shape)))
    _fill(table, solve_node, todo, jobs, on_progress)
    _warn_unconverged(table)
    return table


def extend(
    table: HomTable,
    axis: int,
    side: Literal["lo", "hi"],
    solve_node: NodeSolver,
    jobs: int = 1,
) -> HomTable:
    """Double one lattice axis on one side, solving only the new nodes."""
    axes = list(table.axes)
    axes[axis] = table.axes[axis].extended(side)
    grown = empty_table(
        table.label,
        table.level,
        table.order,
        table.dims,
        axes,
        table.y_points,
        table.resolution,
        table.scheme,
        table.integrand_name,
        table.integrand_params,
    )
    offset = table.axes[axis].count - 1 if side == "lo" else 0
    old = [slice(None)] * (1 + table.n_coords)
    old[1 + axis] = slice(offset, offset + table.axes[axis].count)
    grown.values[tuple(old)] = table.values
    grown.flux[tuple(old)] = table.flux
    grown.converged[tuple(old)] = table.converged

    todo = []
    for index in itertools.product(*(range(n) for n in grown.lattice_shape)):
        if not offset <= index[axis] < offset + table.axes[axis].count:
            todo.append(index)
    logger.info(
        f"Extending table {table.label} on axis {axis} ({side}) "
        f"to [{axes[axis].lo:g}, {axes[axis].hi:g}]"
    )
    _fill(grown, solve_node, todo, jobs, None)
    _warn_unconverged(grown)
    return grown


def _warn_unconverged(table: HomTable) -> None:
    if not table.all_converged:
        bad = int((~table.converged).sum())
        logger.warning(
            f"{bad}/{table.converged.size} cell problems in table {table.label} did not converge"
        )


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


class HomTableSidecar(BaseModel):
    """JSON metadata of a persisted :class:`HomTable`."""

    kind: Literal["homtable"] = "homtable"
    label: str
    level: Level
    order: int
    dims: tuple[int, int]
    axes: list[LatticeAxis]
    n_y: int = Field(description="Number of y samples (rows of the binary payload).")
    resolution: int
    scheme: str = "central"
    integrand_name: str = ""
    integrand_params: dict = Field(default_factory=dict)


def save_table(table: HomTable, path: str | Path) -> Path:
    """Write ``<path>.bin`` (y points, values, fluxes, flags) and ``<path>.json``."""
    bin_path, json_path = sidecar_paths(path)
    sidecar = HomTableSidecar(
        label=table.label,
        level=table.level,
        order=table.order,
        dims=table.dims,
        axes=table.axes,
        n_y=table.n_y,
        resolution=table.resolution,
        scheme=table.scheme,
        integrand_name=table.integrand_name,
        integrand_params=table.integrand_params,
    )
    try:
        write_binary(
            bin_path,
            [table.y_points, table.values, table.flux, table.converged.astype(float)],
        )
        json_path.write_text(sidecar.model_dump_json(indent=2))
    except OSError as e:
        raise ReportIOError(f"Failed to write table to {bin_path}: {e}")
    logger.debug(f"Saved table {table.label} {table.values.shape} to {bin_path}")
    return json_path


def load_table(path: str | Path) -> HomTable:
    bin_path, json_path = sidecar_paths(path)
    try:
        raw = json_path.read_text()
    except OSError as e:
        raise ReportIOError(f"Failed to read table sidecar {json_path}: {e}")
    try:
        meta = HomTableSidecar.model_validate_json(raw)
    except ValidationError as e:
        raise DataError(f"Malformed table sidecar {json_path}: {e}")

    lattice = tuple(a.count for a in meta.axes)
    shapes = [
        (meta.n_y, meta.dims[0]),
        (meta.n_y,) + lattice,
        (meta.n_y,) + lattice + (len(meta.axes),),
        (meta.n_y,) + lattice,
    ]
    try:
        y_points, values, flux, converged = read_binary(bin_path, shapes)
    except OSError as e:
        raise ReportIOError(f"Failed to read table from {bin_path}: {e}")
    return HomTable(
        label=meta.label,
        level=meta.level,
        order=meta.order,
        dims=meta.dims,
        axes=meta.axes,
        y_points=y_points,
        values=values,
        flux=flux,
        converged=converged.astype(bool),
        resolution=meta.resolution,
        scheme=meta.scheme,
        integrand_name=meta.integrand_name,
        integrand_params=meta.integrand_params,
    )
