"""First-order recovery sequences ``u + eps phi(x/eps) + eps^2 psi(x/eps, x/eps^2)``."""

from __future__ import annotations

from typing import Callable

import numpy as np

from reithom import logger
from reithom.errors import ContractError
from reithom.fields.grid import MacroGrid, check_commensurate
from reithom.fields.periodic import Cells, PeriodicField, gradient
from reithom.integrand.models import ScaleMap
from reithom.twoscale.models import RecoveryReport

MacroField = Callable[[np.ndarray], np.ndarray]

# Step of the central difference applied to macro callables.
MACRO_STEP = 1e-5


def _components(values: np.ndarray, lead: tuple[int, ...]) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape == lead:
        return values[..., None]
    return np.broadcast_to(values, lead + values.shape[len(lead) :])


def macro_gradient(u: MacroField, x: np.ndarray) -> np.ndarray:
    """``Du`` of a callable at ``x`` of shape ``(..., N)``; returns ``(..., d, N)``."""
    lead, dim = x.shape[:-1], x.shape[-1]
    parts = []
    for a in range(dim):
        step = np.zeros(dim)
        step[a] = MACRO_STEP
        plus = _components(u(x + step), lead)
        minus = _components(u(x - step), lead)
        parts.append((plus - minus) / (2.0 * MACRO_STEP))
    return np.stack(parts, axis=-1)


def _check_fields(phi: PeriodicField | None, psi: PeriodicField | None) -> None:
    if phi is not None and phi.cells is not Cells.Y:
        raise ContractError(f"phi must live on Y, got {phi.cells.value}")
    if psi is not None and psi.cells is not Cells.YZ:
        raise ContractError(f"psi must live on Y x Z, got {psi.cells.value}")


def build_recovery_s1(
    u: MacroField,
    phi: PeriodicField | None,
    psi: PeriodicField | None,
    epsilon: float,
    grid: MacroGrid,
) -> np.ndarray:
    """Node values of ``u + eps phi(x/eps) + eps^2 psi(x/eps, x/eps^2)``.

    Returns an array of shape ``(n_points,)*N + (d,)``. ``phi`` and ``psi`` are
    sampled off-grid by periodic interpolation; either may be ``None``.
    """
    check_commensurate(epsilon, grid.length, grid.n_cells)
    _check_fields(phi, psi)
    x = grid.nodes()
    values = _components(u(x), x.shape[:-1]).copy()
    y, z = ScaleMap(epsilon).sample(x)
    if phi is not None:
        values = values + epsilon * phi.sample(y)
    if psi is not None:
        values = values + epsilon**2 * psi.sample(np.concatenate([y, z], axis=-1))
    return values


def _edge_differences(values: np.ndarray, grid: MacroGrid, axis: int) -> np.ndarray:
    lo = [slice(None)] * grid.dim
    hi = [slice(None)] * grid.dim
    lo[axis], hi[axis] = slice(0, -1), slice(1, None)
    return (values[tuple(hi)] - values[tuple(lo)]) / grid.h


def recovery_report(
    u: MacroField,
    phi: PeriodicField | None,
    psi: PeriodicField | None,
    epsilon: float,
    grid: MacroGrid,
) -> RecoveryReport:
    """Gradient defect of the recovery against ``Du + Dphi + D_z psi``.

    Forward differences along every axis are compared at edge midpoints; the
    remainder is ``eps D_y psi`` plus the cell interpolation error.
    """
    values = build_recovery_s1(u, phi, psi, epsilon, grid)
    nodes = grid.nodes()
    base = _components(u(nodes), nodes.shape[:-1])
    distance = float(np.max(np.abs(values - base))) if values.size else 0.0

    dphi = gradient(phi, "spectral") if phi is not None else None
    dpsi = gradient(psi, "spectral") if psi is not None else None
    scale = ScaleMap(epsilon)
    defect = 0.0
    for a in range(grid.dim):
        discrete = _edge_differences(values, grid, a)
        lo = [slice(None)] * grid.dim
        lo[a] = slice(0, -1)
        edges = nodes[tuple(lo)].copy()
        edges[..., a] += 0.5 * grid.h
        expected = macro_gradient(u, edges)[..., a]
        y, z = scale.sample(edges)
        if dphi is not None:
            expected = expected + dphi.sample(y)[..., a]
        if dpsi is not None:
            z_slope = dpsi.sample(np.concatenate([y, z], axis=-1))[..., grid.dim + a]
            expected = expected + z_slope
        defect = max(defect, float(np.max(np.abs(discrete - expected))))

    logger.debug(f"Recovery at eps={epsilon:g}: gradient defect {defect:.3e}")
    return RecoveryReport(
        epsilon=epsilon,
        gradient_defect=defect,
        defect_constant=defect / epsilon,
        distance=distance,
    )
