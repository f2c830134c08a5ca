"""Direct minimization of ``F_eps(u) = int_Omega f(x/eps, x/eps^2, D^s u) dx``.

``s = 1``: continuous P1 elements on the Kuhn triangulation of the node grid
(``N!`` simplices per cube), one-point quadrature at simplex centroids.
``s = 2``: 1-D compact second differences at interior nodes, with the two end
nodes on each side pinned to the boundary data.

Dirichlet nodes are pinned by projection; the minimizer is the same batched
Barzilai-Borwein scheme as the cell problems, preconditioned with a sparse
LU factorization of the interior Laplacian (or bi-Laplacian).
"""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import splu

from reithom import logger
from reithom.cell.minimize import minimize_bb
from reithom.cell.models import SolverParams
from reithom.errors import ContractError
from reithom.fields.grid import MacroGrid, check_commensurate
from reithom.gamma.models import EpsilonRun
from reithom.integrand.evaluate import require_smooth
from reithom.integrand.models import Integrand, ScaleMap


def _cells(n: int, offset: tuple[int, ...]) -> tuple:
    return tuple(slice(o, o + n) for o in offset)


def kuhn_paths(dim: int) -> list[tuple[tuple[int, ...], list[tuple[int, ...]]]]:
    """Per permutation: its axis order and the vertex offsets ``0 = o_0, ..., o_N = 1``."""
    paths = []
    for order in permutations(range(dim)):
        offsets = [(0,) * dim]
        for axis in order:
            step = list(offsets[-1])
            step[axis] = 1
            offsets.append(tuple(step))
        paths.append((order, offsets))
    return paths


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------


class _DirichletObjective:
    """Shared pinning, projection and preconditioning over ``(B, *nodes, d)`` arrays."""

    def __init__(self, grid: MacroGrid, mask: np.ndarray, stiffness: sparse.spmatrix):
        self.grid = grid
        self.mask = mask
        self.pinned = np.asarray(grid.boundary(grid.nodes()), dtype=float)
        self.free = np.flatnonzero(~mask.ravel())
        self.lu = splu(stiffness.tocsc()) if self.free.size else None

    def project(self, x: np.ndarray) -> np.ndarray:
        x = x.copy()
        x[:, self.mask] = self.pinned[self.mask]
        return x

    def precondition(self, g: np.ndarray) -> np.ndarray:
        out = np.zeros_like(g)
        if self.lu is None:
            return out
        batch, comps = g.shape[0], g.shape[-1]
        flat = g.reshape(batch, -1, comps)[:, self.free]
        rhs = np.moveaxis(flat, 0, 1).reshape(self.free.size, -1)
        sol = self.lu.solve(rhs).reshape(self.free.size, batch, comps)
        view = out.reshape(batch, -1, comps)
        view[:, self.free] = np.moveaxis(sol, 1, 0)
        return out

    def energy(self, x: np.ndarray, members: np.ndarray) -> np.ndarray:
        return self.energy_and_gradient(x, members, with_gradient=False)[0]


class P1Objective(_DirichletObjective):
    """First-order energy on the Kuhn triangulation of ``grid``."""

    def __init__(self, ig: Integrand, grid: MacroGrid, epsilon: float):
        n, dim = grid.n_cells, grid.dim
        self.ig = ig
        self.grid = grid
        self.paths = kuhn_paths(dim)
        self.volume = grid.h**dim / math.factorial(dim)
        scale = ScaleMap(epsilon)
        corners = grid.nodes()[_cells(n, (0,) * dim)]
        self.samples = []
        for order, _ in self.paths:
            centroid = corners.copy()
            for k, axis in enumerate(order, start=1):
                centroid[..., axis] += grid.h * (dim - k + 1) / (dim + 1)
            self.samples.append(scale.sample(centroid))
        super().__init__(grid, grid.boundary_mask(), self._laplacian())

    def _laplacian(self) -> sparse.spmatrix:
        grid = self.grid
        shape = (grid.n_points,) * grid.dim
        index = np.arange(grid.total_nodes).reshape(shape)
        weight = self.volume / grid.h**2
        rows, cols, vals = [], [], []
        for _, offsets in self.paths:
            for a, b in zip(offsets, offsets[1:]):
                i = index[_cells(grid.n_cells, a)].ravel()
                j = index[_cells(grid.n_cells, b)].ravel()
                w = np.full(i.size, weight)
                rows += [i, j, i, j]
                cols += [i, j, j, i]
                vals += [w, w, -w, -w]
        full = sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(grid.total_nodes, grid.total_nodes),
        )
        free = np.flatnonzero(~grid.boundary_mask().ravel())
        return full[free][:, free]

    def _slice(self, x: np.ndarray, offset: tuple[int, ...]) -> np.ndarray:
        return x[(slice(None),) + _cells(self.grid.n_cells, offset)]

    def gradients(self, x: np.ndarray):
        """``(order, offsets, y, z, Du)`` per simplex family; ``Du`` is ``(B, *cells, d, N)``."""
        h = self.grid.h
        for (order, offsets), (y, z) in zip(self.paths, self.samples):
            du = np.empty(self._slice(x, offsets[0]).shape + (self.grid.dim,))
            for k, axis in enumerate(order, start=1):
                du[..., axis] = (self._slice(x, offsets[k]) - self._slice(x, offsets[k - 1])) / h
            yield order, offsets, y, z, du

    def energy_and_gradient(self, x, members, with_gradient: bool = True):
        cell_axes = tuple(range(1, 1 + self.grid.dim))
        energy = np.zeros(x.shape[0])
        grad = np.zeros_like(x) if with_gradient else None
        for order, offsets, y, z, du in self.gradients(x):
            energy += self.volume * np.sum(self.ig.density(y, z, du), axis=cell_axes)
            if not with_gradient:
                continue
            sigma = self.ig.flux(y, z, du) * (self.volume / self.grid.h)
            for k, axis in enumerate(order, start=1):
                part = sigma[..., axis]
                self._slice(grad, offsets[k])[...] += part
                self._slice(grad, offsets[k - 1])[...] -= part
        if with_gradient:
            grad[:, self.mask] = 0.0
        return energy, grad


class ClampedObjective(_DirichletObjective):
    """Second-order 1-D energy ``sum_k h f(y_k, z_k, D^2 u_k)`` over interior nodes."""

    def __init__(self, ig: Integrand, grid: MacroGrid, epsilon: float):
        if grid.dim != 1:
            raise ContractError("second-order direct problems are 1-D")
        if grid.n_cells < 4:
            raise ContractError("second-order direct problems need at least 4 cells")
        self.ig = ig
        self.y, self.z = ScaleMap(epsilon).sample(grid.nodes()[1:-1])
        mask = np.zeros(grid.n_points, dtype=bool)
        mask[[0, 1, -2, -1]] = True
        super().__init__(grid, mask, self._bilaplacian(grid, mask))

    @staticmethod
    def _bilaplacian(grid: MacroGrid, mask: np.ndarray) -> sparse.spmatrix:
        n = grid.n_cells
        stencil = sparse.diags(
            [np.ones(n - 1), -2.0 * np.ones(n - 1), np.ones(n - 1)],
            [0, 1, 2],
            shape=(n - 1, n + 1),
        ) / grid.h**2
        free = stencil.tocsc()[:, np.flatnonzero(~mask)]
        return grid.h * (free.T @ free)

    def second(self, x: np.ndarray) -> np.ndarray:
        """``D^2 u`` at interior nodes as ``(B, n - 1, d, 1, 1)``."""
        d2 = (x[:, 2:] - 2.0 * x[:, 1:-1] + x[:, :-2]) / self.grid.h**2
        return d2[..., None, None]

    def energy_and_gradient(self, x, members, with_gradient: bool = True):
        h = self.grid.h
        d2 = self.second(x)
        energy = h * np.sum(self.ig.density(self.y, self.z, d2), axis=1)
        if not with_gradient:
            return energy, None
        part = self.ig.flux(self.y, self.z, d2)[..., 0, 0] / h
        grad = np.zeros_like(x)
        grad[:, 2:] += part
        grad[:, 1:-1] -= 2.0 * part
        grad[:, :-2] += part
        grad[:, self.mask] = 0.0
        return energy, grad


# ---------------------------------------------------------------------------
# Runs
# ---------------------------------------------------------------------------


def _check_data(ig: Integrand, grid: MacroGrid) -> None:
    if grid.boundary.order != ig.order:
        raise ContractError(
            f"order-{ig.order} integrand needs {'affine' if ig.order == 1 else 'quadratic'} "
            f"boundary data, got {grid.boundary.kind}"
        )
    if grid.dim != ig.dim or grid.boundary.components != ig.components:
        raise ContractError(
            f"grid (N={grid.dim}, d={grid.boundary.components}) does not match "
            f"integrand (N={ig.dim}, d={ig.components})"
        )


def objective_for(ig: Integrand, grid: MacroGrid, epsilon: float) -> _DirichletObjective:
    _check_data(ig, grid)
    if ig.order == 1:
        return P1Objective(ig, grid, epsilon)
    return ClampedObjective(ig, grid, epsilon)


def minimize_on_grid(
    ig: Integrand, grid: MacroGrid, epsilon: float, params: SolverParams | None = None
) -> EpsilonRun:
    """Minimize without the commensurability check (for oscillation-free densities)."""
    require_smooth(ig)
    params = params or SolverParams()
    objective = objective_for(ig, grid, epsilon)
    x0 = objective.pinned[None].copy()
    result = minimize_bb(objective, x0, params)
    run = EpsilonRun(
        epsilon=epsilon,
        grid=grid,
        minimizer=result.x[0],
        energy=float(result.energy[0]),
        iterations=int(result.iterations[0]),
        grad_norm=float(result.grad_norm[0]),
        converged=bool(result.converged[0]),
        stop_reason=result.stop_reason[0],
    )
    if not run.converged:
        logger.warning(
            f"F_eps minimization at eps={epsilon:g} stopped unconverged ({run.stop_reason})"
        )
    return run


def solve_epsilon(
    ig: Integrand, grid: MacroGrid, epsilon: float, params: SolverParams | None = None
) -> EpsilonRun:
    """``min F_eps`` with Dirichlet data ``grid.boundary``; ``grid`` must resolve ``eps^2``."""
    check_commensurate(epsilon, grid.length, grid.n_cells)
    run = minimize_on_grid(ig, grid, epsilon, params)
    logger.info(
        f"eps={epsilon:g}: min F_eps = {run.energy:.12g} on {grid.total_nodes} nodes "
        f"({run.iterations} iterations)"
    )
    return run


def energy_of(ig: Integrand, grid: MacroGrid, epsilon: float, nodes: np.ndarray) -> float:
    """``F_eps`` of given node values (boundary values are used as given)."""
    objective = objective_for(ig, grid, epsilon)
    values = np.asarray(nodes, dtype=float)
    if values.shape == objective.pinned.shape[:-1]:
        values = values[..., None]
    if values.shape != objective.pinned.shape:
        raise ContractError(
            f"node values of shape {values.shape} do not match {objective.pinned.shape}"
        )
    return float(objective.energy(values[None], np.arange(1))[0])
