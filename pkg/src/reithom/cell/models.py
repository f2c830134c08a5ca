"""Cell-problem inputs, solutions and the homogenized-table lattice."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator

from reithom.errors import ContractError
from reithom.fields.differentiation import Scheme
from reithom.fields.periodic import PeriodicField
from reithom.integrand.models import Integrand

Level = Literal["inner", "outer"]


class SolverParams(BaseModel):
    """Stopping rules of the preconditioned Barzilai-Borwein minimizer."""

    max_iter: int = Field(20000, ge=1, description="Iteration cap per problem.")
    grad_tol: float = Field(
        1e-8, gt=0, description="Preconditioned (dual) gradient norm at which to stop."
    )
    energy_tol: float = Field(
        1e-12, ge=0, description="Relative best-energy decrease over `window` iterations."
    )
    window: int = Field(10, ge=1, description="Nonmonotone memory and stagnation window.")
    armijo: float = Field(1e-4, gt=0, lt=1, description="Sufficient-decrease constant.")
    max_backtracks: int = Field(60, ge=1, description="Step halvings before giving up.")
    step_bounds: tuple[float, float] = Field(
        (1e-10, 1e10), description="Clamp on the Barzilai-Borwein step."
    )


class LatticeAxis(BaseModel):
    """Equispaced nodes ``lo .. hi`` along one free coordinate of xi."""

    lo: float
    hi: float
    count: int = Field(ge=2)

    @model_validator(mode="after")
    def _ordered(self) -> "LatticeAxis":
        if not self.hi > self.lo:
            raise ValueError(f"lattice axis needs lo < hi, got [{self.lo}, {self.hi}]")
        return self

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.count - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)

    def extended(self, side: Literal["lo", "hi"]) -> "LatticeAxis":
        """Double the width on one side, keeping the spacing."""
        extra = (self.count - 1) * self.spacing
        if side == "lo":
            return LatticeAxis(lo=self.lo - extra, hi=self.hi, count=2 * self.count - 1)
        return LatticeAxis(lo=self.lo, hi=self.hi + extra, count=2 * self.count - 1)


# ---------------------------------------------------------------------------
# Free coordinates of xi
# ---------------------------------------------------------------------------


def free_indices(ig: Integrand) -> list[tuple[int, ...]]:
    """Tensor entries a lattice spans: all of them for s=1, the upper triangle for s=2."""
    if ig.order == 1:
        return [tuple(i) for i in np.ndindex(*ig.xi_shape)]
    d, n, _ = ig.xi_shape
    return [(c, a, b) for c in range(d) for a in range(n) for b in range(a, n)]


def coords_to_tensor(ig: Integrand, coords: np.ndarray) -> np.ndarray:
    """``(..., K)`` free coordinates to ``(..., *xi_shape)`` tensors."""
    coords = np.asarray(coords, dtype=float)
    out = np.zeros(coords.shape[:-1] + ig.xi_shape)
    for k, idx in enumerate(free_indices(ig)):
        out[(...,) + idx] = coords[..., k]
        if ig.order == 2:
            c, a, b = idx
            out[..., c, b, a] = coords[..., k]
    return out


def tensor_to_coords(ig: Integrand, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    return np.stack([xi[(...,) + idx] for idx in free_indices(ig)], axis=-1)


def flux_to_coords(ig: Integrand, sigma: np.ndarray) -> np.ndarray:
    """Derivative with respect to each free coordinate; off-diagonals count twice."""
    sigma = np.asarray(sigma, dtype=float)
    cols = []
    for idx in free_indices(ig):
        value = sigma[(...,) + idx]
        if ig.order == 2 and idx[1] != idx[2]:
            value = value + sigma[..., idx[0], idx[2], idx[1]]
        cols.append(value)
    return np.stack(cols, axis=-1)


def coords_flux_to_tensor(ig: Integrand, g: np.ndarray) -> np.ndarray:
    """Inverse of :func:`flux_to_coords` for symmetric fluxes."""
    g = np.asarray(g, dtype=float)
    out = np.zeros(g.shape[:-1] + ig.xi_shape)
    for k, idx in enumerate(free_indices(ig)):
        if ig.order == 2 and idx[1] != idx[2]:
            c, a, b = idx
            out[..., c, a, b] = 0.5 * g[..., k]
            out[..., c, b, a] = 0.5 * g[..., k]
        else:
            out[(...,) + idx] = g[..., k]
    return out


# ---------------------------------------------------------------------------
# Problems and solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CellProblem:
    """One inner (frozen ``y``, field on ``Z``) or outer (field on ``Y``) cell problem.

    Outer problems read their density from ``table``.
    """

    integrand: Integrand
    level: Level
    xi: np.ndarray
    resolution: int
    frozen_y: np.ndarray | None = None
    table: object | None = None
    scheme: Scheme = "central"
    params: SolverParams = field(default_factory=SolverParams)

    def __post_init__(self) -> None:
        xi = np.asarray(self.xi, dtype=float)
        if xi.size != int(np.prod(self.integrand.xi_shape)):
            raise ContractError(
                f"xi has {xi.size} entries, expected shape {self.integrand.xi_shape}"
            )
        xi = xi.reshape(self.integrand.xi_shape)
        xi = self.integrand.prepare(xi)
        object.__setattr__(self, "xi", xi)
        if self.level == "inner":
            if self.frozen_y is None:
                raise ContractError("inner cell problems need a frozen y")
            y = np.atleast_1d(np.asarray(self.frozen_y, dtype=float))
            if y.shape != (self.integrand.dim,):
                raise ContractError(f"frozen y must lie in R^{self.integrand.dim}")
            object.__setattr__(self, "frozen_y", y)
        elif self.table is None:
            raise ContractError("outer cell problems need an inner table")


@dataclass(frozen=True)
class CellSolution:
    """Minimal cell energy with its corrector and solver diagnostics.

    ``mean_flux`` is the cell average of ``df/dxi`` at the optimum, which is the
    xi-derivative of the cell energy.
    """

    energy: float
    corrector: PeriodicField
    iterations: int
    final_grad_norm: float
    converged: bool
    mean_flux: np.ndarray
    stop_reason: str = ""
    table: object | None = None
