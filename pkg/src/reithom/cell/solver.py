"""Inner and outer periodic cell problems and the reiterated corrector pair.

Inner:  f_hom(y, xi)  = min_psi  avg_Z f(y, z, xi + D^s psi(z))
Outer:  f_hom_bar(xi) = min_phi  avg_Y f_hom(y, xi + D^s phi(y))

Both are solved as batches of discrete convex problems on the cell grid with
the preconditioned Barzilai-Borwein minimizer. Correctors are mean-zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from reithom import logger
from reithom.cell.minimize import minimize_bb
from reithom.cell.models import (
    CellProblem,
    CellSolution,
    LatticeAxis,
    SolverParams,
    coords_flux_to_tensor,
    free_indices,
    tensor_to_coords,
)
from reithom.cell.operators import PeriodicOperator
from reithom.cell.table import (
    HomTable,
    ProgressCallback,
    empty_table,
    extend,
    normalize_lattice,
    populate,
    y_sample_points,
)
from reithom.errors import ContractError, TableRangeError
from reithom.fields.differentiation import Scheme
from reithom.fields.periodic import Cells, PeriodicField, cell_points
from reithom.integrand.evaluate import require_smooth
from reithom.integrand.models import Integrand

MAX_EXTENSIONS = 3


def _grid_points(resolution: int, dim: int) -> np.ndarray:
    axis = cell_points(resolution)
    return np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1)


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------


class _CellObjective:
    """Shared plumbing: ``eta = xi + D^s x`` on a batch of mean-zero fields."""

    def __init__(self, op: PeriodicOperator, xis: np.ndarray) -> None:
        self.op = op
        self.xis = xis
        self.grid_axes = tuple(range(1, 1 + op.dim))
        self.precondition = op.preconditioner()

    def eta(self, x: np.ndarray, members: np.ndarray) -> np.ndarray:
        xi = self.xis[members]
        pad = (slice(None),) + (None,) * self.op.dim
        return xi[pad] + self.op.apply(x)

    def project(self, x: np.ndarray) -> np.ndarray:
        return x - np.mean(x, axis=self.grid_axes, keepdims=True)

    def energy(self, x: np.ndarray, members: np.ndarray) -> np.ndarray:
        return np.mean(self.density(self.eta(x, members), members), axis=self.grid_axes)

    def energy_and_gradient(self, x, members):
        eta = self.eta(x, members)
        energy = np.mean(self.density(eta, members), axis=self.grid_axes)
        sigma = self.flux(eta, members)
        return energy, self.op.adjoint(sigma) / self.op.size

    def mean_flux(self, x: np.ndarray, members: np.ndarray) -> np.ndarray:
        return np.mean(self.flux(self.eta(x, members), members), axis=self.grid_axes)


class InnerObjective(_CellObjective):
    """``avg_Z f(y_b, z, xi_b + D^s psi_b)`` for a batch of frozen ``y_b``."""

    def __init__(self, ig: Integrand, op: PeriodicOperator, ys: np.ndarray, xis: np.ndarray):
        super().__init__(op, xis)
        self.ig = ig
        self.ys = ys
        self.z = _grid_points(op.resolution, op.dim)[None]

    def _y(self, members: np.ndarray) -> np.ndarray:
        return self.ys[members].reshape((-1,) + (1,) * self.op.dim + (self.op.dim,))

    def density(self, eta, members):
        return self.ig.density(self._y(members), self.z, eta)

    def flux(self, eta, members):
        return self.ig.flux(self._y(members), self.z, eta)


class OuterObjective(_CellObjective):
    """``avg_Y F_j(xi + D^s phi(y_j))`` with ``F_j`` the table column nearest ``y_j``."""

    def __init__(self, table: HomTable, op: PeriodicOperator, xi: np.ndarray):
        super().__init__(op, xi[None])
        self.table = table
        self.interpolant = table.interpolant()
        points = _grid_points(op.resolution, op.dim).reshape(-1, op.dim)
        self.columns = table.nearest_column(points)

    def _evaluate(self, eta: np.ndarray):
        coords = tensor_to_coords(self.table, eta)
        lead = coords.shape[:-1]
        flat = coords.reshape(lead[0], -1, self.table.n_coords)
        values = np.empty(flat.shape[:2])
        grads = np.empty(flat.shape)
        for b in range(flat.shape[0]):
            values[b], grads[b] = self.interpolant.evaluate(self.columns, flat[b])
        return values.reshape(lead), grads.reshape(coords.shape)

    def density(self, eta, members):
        return self._evaluate(eta)[0]

    def flux(self, eta, members):
        return coords_flux_to_tensor(self.table, self._evaluate(eta)[1])


# ---------------------------------------------------------------------------
# Inner problems
# ---------------------------------------------------------------------------


@dataclass
class InnerBatch:
    """Solutions of a batch of inner problems; arrays are indexed by batch member."""

    energy: np.ndarray
    mean_flux: np.ndarray
    correctors: np.ndarray
    iterations: np.ndarray
    grad_norm: np.ndarray
    converged: np.ndarray
    stop_reason: list[str]


def solve_inner_batch(
    ig: Integrand,
    ys: np.ndarray,
    xis: np.ndarray,
    resolution: int,
    params: SolverParams | None = None,
    scheme: Scheme = "central",
) -> InnerBatch:
    """Solve the inner problem at every ``(ys[b], xis[b])``; ``xis`` may be one tensor."""
    require_smooth(ig)
    params = params or SolverParams()
    ys = np.asarray(ys, dtype=float).reshape(-1, ig.dim)
    xis = ig.prepare(np.broadcast_to(np.asarray(xis, dtype=float), (ys.shape[0],) + ig.xi_shape))
    op = PeriodicOperator(resolution, ig.dim, ig.components, ig.order, scheme)
    objective = InnerObjective(ig, op, ys, xis)

    result = minimize_bb(objective, np.zeros(op.field_shape(ys.shape[0])), params)
    members = np.arange(ys.shape[0])
    return InnerBatch(
        energy=result.energy,
        mean_flux=objective.mean_flux(result.x, members),
        correctors=result.x,
        iterations=result.iterations,
        grad_norm=result.grad_norm,
        converged=result.converged,
        stop_reason=result.stop_reason,
    )


def solve_inner(cp: CellProblem) -> CellSolution:
    """``f_hom(y, xi)`` for the frozen ``y`` of ``cp`` and its corrector on ``Z``."""
    if cp.level != "inner":
        raise ContractError("solve_inner needs an inner cell problem")
    batch = solve_inner_batch(
        cp.integrand, cp.frozen_y[None], cp.xi, cp.resolution, cp.params, cp.scheme
    )
    return CellSolution(
        energy=float(batch.energy[0]),
        corrector=PeriodicField(batch.correctors[0], Cells.Z, cp.integrand.dim),
        iterations=int(batch.iterations[0]),
        final_grad_norm=float(batch.grad_norm[0]),
        converged=bool(batch.converged[0]),
        mean_flux=batch.mean_flux[0],
        stop_reason=batch.stop_reason[0],
    )


def _inner_node_solver(ig: Integrand, ys, resolution, params, scheme):
    def solve_node(xi: np.ndarray):
        batch = solve_inner_batch(ig, ys, xi, resolution, params, scheme)
        return batch.energy, batch.mean_flux, batch.converged

    return solve_node


def tabulate(
    ig: Integrand,
    lattice: LatticeAxis | list[LatticeAxis],
    y_samples: int,
    resolution: int,
    params: SolverParams | None = None,
    scheme: Scheme = "central",
    jobs: int = 1,
    on_progress: ProgressCallback | None = None,
) -> HomTable:
    """``f_hom(y_j, xi)`` on ``y_samples^N`` cell midpoints times a xi lattice.

    Lattice nodes are solved concurrently on ``jobs`` threads, each node as one
    batch over all y samples.
    """
    axes = normalize_lattice(lattice, len(free_indices(ig)))
    ys = y_sample_points(y_samples, ig.dim)
    table = empty_table(
        label=ig.label,
        level="inner",
        order=ig.order,
        dims=ig.dims,
        axes=axes,
        y_points=ys,
        resolution=resolution,
        scheme=scheme,
        integrand_name=ig.name,
        integrand_params=ig.params,
    )
    logger.info(
        f"Tabulating f_hom for {ig.label}: {ys.shape[0]} y samples x "
        f"{int(np.prod(table.lattice_shape))} lattice nodes at resolution {resolution}"
    )
    return populate(
        table, _inner_node_solver(ig, ys, resolution, params, scheme), jobs, on_progress
    )


def extend_inner_table(
    table: HomTable,
    ig: Integrand,
    axis: int,
    side: str,
    params: SolverParams | None = None,
    jobs: int = 1,
) -> HomTable:
    solve_node = _inner_node_solver(
        ig, table.y_points, table.resolution, params, table.scheme
    )
    return extend(table, axis, side, solve_node, jobs)


# ---------------------------------------------------------------------------
# Outer problems
# ---------------------------------------------------------------------------


def _solve_outer_once(cp: CellProblem, table: HomTable):
    ig = cp.integrand
    op = PeriodicOperator(cp.resolution, ig.dim, ig.components, ig.order, cp.scheme)
    objective = OuterObjective(table, op, cp.xi)
    result = minimize_bb(objective, np.zeros(op.field_shape(1)), cp.params)
    eta = objective.eta(result.x, np.arange(1))
    return objective, result, eta


def solve_outer(cp: CellProblem, jobs: int = 1) -> CellSolution:
    """``f_hom_bar(xi)`` from the inner table of ``cp`` and its corrector on ``Y``.

    When the optimal ``xi + D^s phi`` reaches the table hull the table is
    extended (at most three times); the extended table is returned on the
    solution.
    """
    if cp.level != "outer":
        raise ContractError("solve_outer needs an outer cell problem")
    ig = cp.integrand
    table: HomTable = cp.table
    if table.level != "inner":
        raise ContractError("solve_outer needs an inner (y-dependent) table")

    for attempt in range(MAX_EXTENSIONS + 1):
        hit = table.outside(tensor_to_coords(table, cp.xi))
        if hit is None:
            objective, result, eta = _solve_outer_once(cp, table)
            hit = table.outside(tensor_to_coords(table, eta))
            if hit is None:
                break
        if attempt == MAX_EXTENSIONS:
            axis, side = hit
            raise TableRangeError(
                f"outer problem at xi={cp.xi.ravel().tolist()} leaves the table on "
                f"axis {axis} ({side}) after {MAX_EXTENSIONS} extensions"
            )
        table = extend_inner_table(table, ig, *hit, params=cp.params, jobs=jobs)

    return CellSolution(
        energy=float(result.energy[0]),
        corrector=PeriodicField(result.x[0], Cells.Y, ig.dim),
        iterations=int(result.iterations[0]),
        final_grad_norm=float(result.grad_norm[0]),
        converged=bool(result.converged[0]),
        mean_flux=objective.mean_flux(result.x, np.arange(1))[0],
        stop_reason=result.stop_reason[0],
        table=table,
    )


def tabulate_outer(
    inner: HomTable,
    ig: Integrand,
    lattice: LatticeAxis | list[LatticeAxis],
    resolution: int,
    params: SolverParams | None = None,
    scheme: Scheme = "central",
    jobs: int = 1,
    on_progress: ProgressCallback | None = None,
) -> HomTable:
    """``f_hom_bar`` on a xi lattice, one outer solve per node."""
    params = params or SolverParams()
    axes = normalize_lattice(lattice, inner.n_coords)
    table = empty_table(
        label=f"{ig.label} (outer)",
        level="outer",
        order=ig.order,
        dims=ig.dims,
        axes=axes,
        y_points=np.zeros((1, ig.dim)),
        resolution=resolution,
        scheme=scheme,
        integrand_name=inner.integrand_name,
        integrand_params=inner.integrand_params,
    )

    def solve_node(xi: np.ndarray):
        cp = CellProblem(ig, "outer", xi, resolution, table=inner, scheme=scheme, params=params)
        sol = solve_outer(cp)
        return np.array([sol.energy]), sol.mean_flux[None], np.array([sol.converged])

    return populate(table, solve_node, jobs, on_progress)


# ---------------------------------------------------------------------------
# Reiterated correctors
# ---------------------------------------------------------------------------


@dataclass
class ReiteratedCorrectors:
    """``phi`` on ``Y`` and ``psi`` on ``Y x Z`` realizing ``f_hom_bar(xi)``."""

    xi: np.ndarray
    energy: float
    phi: PeriodicField
    psi: PeriodicField
    inner_energy: np.ndarray
    converged: bool


def reiterated_correctors(
    ig: Integrand,
    xi,
    table: HomTable,
    y_resolution: int,
    z_resolution: int,
    params: SolverParams | None = None,
    scheme: Scheme = "central",
    jobs: int = 1,
) -> ReiteratedCorrectors:
    """Outer corrector at ``xi``, then the inner corrector at every ``y`` grid point
    for the slope ``xi + D^s phi(y)``.

    Both fields are returned in Fourier form (see ``PeriodicOperator.to_spectral``)
    so they can be sampled between nodes; the energies are those of ``scheme``.
    """
    params = params or SolverParams()
    outer = solve_outer(
        CellProblem(ig, "outer", xi, y_resolution, table=table, scheme=scheme, params=params),
        jobs=jobs,
    )
    op = PeriodicOperator(y_resolution, ig.dim, ig.components, ig.order, scheme)
    xi = ig.prepare(np.asarray(xi, dtype=float).reshape(ig.xi_shape))
    eta = xi + op.apply(outer.corrector.values[None])[0]
    ys = _grid_points(y_resolution, ig.dim).reshape(-1, ig.dim)
    batch = solve_inner_batch(
        ig, ys, eta.reshape((-1,) + ig.xi_shape), z_resolution, params, scheme
    )
    inner_op = PeriodicOperator(z_resolution, ig.dim, ig.components, ig.order, scheme)
    phi_values = op.to_spectral(outer.corrector.values[None])[0]
    psi_values = inner_op.to_spectral(batch.correctors)
    grid = (y_resolution,) * ig.dim + (z_resolution,) * ig.dim + (ig.components,)
    logger.debug(
        f"Reiterated correctors at xi={xi.ravel().tolist()}: "
        f"{y_resolution}^{ig.dim} x {z_resolution}^{ig.dim} nodes, scheme {scheme}"
    )
    return ReiteratedCorrectors(
        xi=xi,
        energy=outer.energy,
        phi=PeriodicField(phi_values, Cells.Y, ig.dim),
        psi=PeriodicField(psi_values.reshape(grid), Cells.YZ, 2 * ig.dim),
        inner_energy=batch.energy.reshape((y_resolution,) * ig.dim),
        converged=outer.converged and bool(np.all(batch.converged)),
    )
