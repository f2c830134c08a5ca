"""Sampled fields on the periodic unit cells Y, Z and Y x Z.

Cells are copies of ``(-1/2, 1/2)^N`` sampled at midpoints, so the midpoint
rule integrates trigonometric polynomials below the Nyquist degree exactly.
A field's ``values`` have shape ``(*grid, *components)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from reithom.errors import ContractError, ResolutionError
from reithom.fields.differentiation import Scheme, derivative, second_derivative

MIN_RESOLUTION = 8


class Cells(str, Enum):
    """Which periodic cell(s) a field lives on."""

    Y = "Y"
    Z = "Z"
    YZ = "YxZ"
    OMEGA_YZ = "OmegaxYxZ"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def cell_points(resolution: int) -> np.ndarray:
    """Midpoints of ``resolution`` equal subintervals of (-1/2, 1/2)."""
    return -0.5 + (np.arange(resolution) + 0.5) / resolution


def wrap(points: np.ndarray) -> np.ndarray:
    """Reduce coordinates to the cell ``[-1/2, 1/2)``."""
    return points - np.floor(points + 0.5)


@dataclass(frozen=True)
class PeriodicField:
    """A sampled function on a periodic cell.

    For ``Cells.OMEGA_YZ`` the first third of the grid axes sample the
    macroscopic box ``(0, length)^N`` at midpoints; those axes are not
    periodic and are skipped by differentiation.
    """

    values: np.ndarray
    cells: Cells
    grid_ndim: int
    length: float = 1.0

    def __post_init__(self) -> None:
        if self.values.ndim < self.grid_ndim:
            raise ContractError(
                f"values of shape {self.values.shape} have fewer than "
                f"{self.grid_ndim} grid axes"
            )
        if self.cells in (Cells.YZ,) and self.grid_ndim % 2:
            raise ContractError("a Y x Z field needs an even number of grid axes")
        if self.cells is Cells.OMEGA_YZ and self.grid_ndim % 3:
            raise ContractError("an Omega x Y x Z field needs 3N grid axes")
        for n in self.values.shape[: self.grid_ndim]:
            if n < MIN_RESOLUTION or not _is_power_of_two(n):
                raise ResolutionError(
                    f"resolution per axis must be a power of two >= {MIN_RESOLUTION}, "
                    f"got {self.values.shape[: self.grid_ndim]}"
                )

    # -----------------------------------------------------------------------
    # Shape helpers
    # -----------------------------------------------------------------------

    @property
    def resolution(self) -> tuple[int, ...]:
        return tuple(self.values.shape[: self.grid_ndim])

    @property
    def component_shape(self) -> tuple[int, ...]:
        return tuple(self.values.shape[self.grid_ndim :])

    @property
    def grid_axes(self) -> tuple[int, ...]:
        return tuple(range(self.grid_ndim))

    @property
    def periodic_axes(self) -> tuple[int, ...]:
        if self.cells is Cells.OMEGA_YZ:
            return tuple(range(self.grid_ndim // 3, self.grid_ndim))
        return self.grid_axes

    @property
    def measure(self) -> float:
        if self.cells is Cells.OMEGA_YZ:
            return float(self.length ** (self.grid_ndim // 3))
        return 1.0

    def points(self) -> np.ndarray:
        """Sample coordinates, shape ``(*grid, grid_ndim)``."""
        axes = []
        for axis, n in enumerate(self.resolution):
            if axis in self.periodic_axes:
                axes.append(cell_points(n))
            else:
                axes.append((np.arange(n) + 0.5) * self.length / n)
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    # -----------------------------------------------------------------------
    # Constructors
    # -----------------------------------------------------------------------

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        cells: Cells,
        resolution: int,
        dim: int = 1,
        length: float = 1.0,
    ) -> "PeriodicField":
        """Sample ``fn(points)`` where ``points`` has shape ``(*grid, axes)``."""
        factor = {Cells.Y: 1, Cells.Z: 1, Cells.YZ: 2, Cells.OMEGA_YZ: 3}[cells]
        grid_ndim = factor * dim
        template = cls(
            values=np.zeros((resolution,) * grid_ndim),
            cells=cells,
            grid_ndim=grid_ndim,
            length=length,
        )
        values = np.asarray(fn(template.points()), dtype=float)
        return replace(template, values=values)

    # -----------------------------------------------------------------------
    # Off-grid evaluation
    # -----------------------------------------------------------------------

    def sample(self, points: np.ndarray, method: str = "cubic") -> np.ndarray:
        """Evaluate at arbitrary points by periodic interpolation.

        ``points`` has shape ``(..., grid_ndim)``; coordinates are wrapped into
        the cell first.
        """
        if self.cells is Cells.OMEGA_YZ:
            raise ContractError("off-grid sampling needs a fully periodic field")
        pad = 3
        padded = np.pad(
            self.values,
            [(pad, pad)] * self.grid_ndim + [(0, 0)] * len(self.component_shape),
            mode="wrap",
        )
        axes = [
            -0.5 + (np.arange(-pad, n + pad) + 0.5) / n for n in self.resolution
        ]
        interpolator = RegularGridInterpolator(axes, padded, method=method)
        query = wrap(np.asarray(points, dtype=float))
        flat = query.reshape(-1, self.grid_ndim)
        result = interpolator(flat)
        return result.reshape(query.shape[:-1] + self.component_shape)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def integrate(field: PeriodicField) -> float | np.ndarray:
    """Midpoint-rule integral over the cell, per component."""
    total = field.measure * np.mean(field.values, axis=field.grid_axes)
    if np.ndim(total) == 0:
        return float(total)
    return total


def gradient(field: PeriodicField, scheme: Scheme = "central") -> PeriodicField:
    """Periodic derivative along every periodic axis; appends one component axis."""
    parts = [derivative(field.values, axis, scheme) for axis in field.periodic_axes]
    return replace(field, values=np.stack(parts, axis=-1))


def hessian(field: PeriodicField, scheme: Scheme = "central") -> PeriodicField:
    """Symmetric matrix of second derivatives; appends two component axes."""
    axes = field.periodic_axes
    rows = []
    for a in axes:
        row = []
        for b in axes:
            row.append(second_derivative(field.values, a, b, scheme))
        rows.append(np.stack(row, axis=-1))
    matrix = np.stack(rows, axis=-2)
    matrix = 0.5 * (matrix + np.swapaxes(matrix, -1, -2))
    return replace(field, values=matrix)


def project_mean_zero(field: PeriodicField) -> PeriodicField:
    """Subtract the cell average of every component."""
    mean = np.mean(field.values, axis=field.grid_axes, keepdims=True)
    return replace(field, values=field.values - mean)
