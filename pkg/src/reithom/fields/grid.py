"""Macroscopic box grids, Dirichlet boundary data and the commensurability rule.

The macro domain is ``(0, L)^N`` discretized by ``n_cells`` equal cells per
axis. Scale parameters are dyadic (``eps = 2**-k``) and the grid must hold an
integer number of fast periods ``eps**2`` with at least eight points each, so
every oscillation is sampled exactly and nothing aliases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from reithom.errors import ContractError, ResolutionError

MIN_POINTS_PER_PERIOD = 8


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet data on the macro box.

    ``affine``: ``u(x) = xi0 @ x`` with ``xi0`` of shape ``(d, N)``.
    ``quadratic``: ``u(x) = x . xi0 x / 2`` per component, ``xi0`` of shape
    ``(d, N, N)`` and symmetric.
    """

    kind: Literal["affine", "quadratic"]
    xi0: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in ("affine", "quadratic"):
            raise ContractError(f"unknown boundary data kind '{self.kind}'")
        expected = 2 if self.kind == "affine" else 3
        if np.ndim(self.xi0) != expected:
            raise ContractError(
                f"{self.kind} boundary data needs xi0 with {expected} axes, "
                f"got shape {np.shape(self.xi0)}"
            )
        if not np.all(np.isfinite(self.xi0)):
            raise ContractError("boundary slope must be finite")

    @property
    def order(self) -> int:
        return 1 if self.kind == "affine" else 2

    @property
    def components(self) -> int:
        return int(np.shape(self.xi0)[0])

    @property
    def dim(self) -> int:
        return int(np.shape(self.xi0)[1])

    @classmethod
    def affine(cls, slope: float | np.ndarray, dim: int = 1) -> "BoundaryData":
        xi0 = np.broadcast_to(np.asarray(slope, dtype=float), (1, dim)).copy()
        return cls("affine", xi0)

    @classmethod
    def quadratic(cls, curvature: float | np.ndarray, dim: int = 1) -> "BoundaryData":
        q = np.asarray(curvature, dtype=float)
        if q.ndim == 0:
            q = q * np.eye(dim)
        if q.ndim == 2:
            q = q[None]
        return cls("quadratic", 0.5 * (q + np.swapaxes(q, -1, -2)))

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Values at ``points`` of shape ``(..., N)``; returns ``(..., d)``."""
        x = np.asarray(points, dtype=float)
        if self.kind == "affine":
            return np.einsum("dn,...n->...d", self.xi0, x)
        return 0.5 * np.einsum("...m,dmn,...n->...d", x, self.xi0, x)

    def derivative(self, points: np.ndarray) -> np.ndarray:
        """``D^s`` of the data at ``points``: ``(..., d, N)`` or ``(..., d, N, N)``."""
        x = np.asarray(points, dtype=float)
        lead = x.shape[:-1]
        return np.broadcast_to(self.xi0, lead + self.xi0.shape).copy()


@dataclass(frozen=True)
class MacroGrid:
    """Uniform node grid on ``(0, length)^dim`` with ``n_cells`` cells per axis."""

    length: float
    n_cells: int
    dim: int = 1
    boundary: BoundaryData = field(default_factory=lambda: BoundaryData.affine(0.0))

    def __post_init__(self) -> None:
        if self.length <= 0:
            raise ContractError(f"domain length must be positive, got {self.length}")
        if self.n_cells < 2:
            raise ResolutionError(f"need at least 2 cells per axis, got {self.n_cells}")
        if self.dim not in (1, 2, 3):
            raise ContractError(f"macro grids support N in {{1, 2, 3}}, got {self.dim}")
        if self.boundary.dim != self.dim:
            raise ContractError(
                f"boundary data is {self.boundary.dim}-D but the grid is {self.dim}-D"
            )

    @property
    def h(self) -> float:
        return self.length / self.n_cells

    @property
    def n_points(self) -> int:
        """Nodes per axis, boundary included."""
        return self.n_cells + 1

    @property
    def measure(self) -> float:
        return float(self.length**self.dim)

    @property
    def total_nodes(self) -> int:
        return self.n_points**self.dim

    def node_axis(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_points)

    def midpoint_axis(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.h

    def nodes(self) -> np.ndarray:
        """Node coordinates, shape ``(n_points,)*N + (N,)``."""
        axis = self.node_axis()
        mesh = np.meshgrid(*([axis] * self.dim), indexing="ij")
        return np.stack(mesh, axis=-1)

    def midpoints(self) -> np.ndarray:
        """Cell-center coordinates, shape ``(n_cells,)*N + (N,)``."""
        axis = self.midpoint_axis()
        mesh = np.meshgrid(*([axis] * self.dim), indexing="ij")
        return np.stack(mesh, axis=-1)

    def boundary_mask(self) -> np.ndarray:
        """True on nodes of the box boundary."""
        mask = np.zeros((self.n_points,) * self.dim, dtype=bool)
        for axis in range(self.dim):
            index = [slice(None)] * self.dim
            index[axis] = 0
            mask[tuple(index)] = True
            index[axis] = -1
            mask[tuple(index)] = True
        return mask

    def with_cells(self, n_cells: int) -> "MacroGrid":
        return MacroGrid(self.length, n_cells, self.dim, self.boundary)


# ---------------------------------------------------------------------------
# Commensurability
# ---------------------------------------------------------------------------


def dyadic_exponent(epsilon: float) -> int:
    """``k`` with ``epsilon == 2**-k``; anything else is a contract error."""
    if not (0 < epsilon <= 1):
        raise ContractError(f"epsilon must lie in (0, 1], got {epsilon}")
    k = -math.log2(epsilon)
    if abs(k - round(k)) > 1e-12:
        raise ContractError(f"epsilon={epsilon} is not dyadic (2**-k)")
    return int(round(k))


def fast_periods(epsilon: float, length: float) -> int:
    """Number of fast periods ``eps**2`` across ``length``; must be integral."""
    dyadic_exponent(epsilon)
    periods = length / epsilon**2
    if abs(periods - round(periods)) > 1e-9 * max(1.0, periods):
        raise ContractError(
            f"length {length} does not hold an integer number of periods of eps^2={epsilon**2}"
        )
    return int(round(periods))


def check_commensurate(
    epsilon: float,
    length: float,
    n_cells: int,
    min_points: int = MIN_POINTS_PER_PERIOD,
) -> int:
    """Validate ``eps`` against a grid; returns points per fast period.

    Raises ``ContractError`` when the oscillations do not fit the grid exactly
    and ``ResolutionError`` when a fast period has fewer than ``min_points``.
    """
    periods = fast_periods(epsilon, length)
    if n_cells % periods:
        raise ContractError(
            f"{n_cells} cells per axis is not a multiple of the {periods} fast periods "
            f"of eps={epsilon}"
        )
    per_period = n_cells // periods
    if per_period < min_points:
        raise ResolutionError(
            f"eps={epsilon} leaves {per_period} points per fast period; "
            f"need at least {min_points}"
        )
    return per_period


def resolving_cells(epsilon: float, length: float, res_per_period: int) -> int:
    """Cells per axis so each fast period holds ``res_per_period`` points."""
    return fast_periods(epsilon, length) * res_per_period

