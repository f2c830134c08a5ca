"""Oscillating sequences ``v(x, x/eps, x/eps^2)``, corrector triples and reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from pydantic import BaseModel, Field

from reithom.errors import ContractError
from reithom.fields.grid import MacroGrid, check_commensurate, resolving_cells
from reithom.integrand.models import ScaleMap

# (x, y, z) -> value, every argument shaped (..., N)
Generator = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class OscillatingSequence:
    """``u_eps(x) = v(x, x/eps, x/eps^2)`` for a dyadic, decreasing ``eps`` list.

    With ``points_per_period`` set, every ``eps`` gets its own grid holding that
    many points per fast period; otherwise ``grid`` must resolve all of them.
    """

    label: str
    generator: Generator
    epsilons: tuple[float, ...]
    grid: MacroGrid
    points_per_period: int | None = None

    def __post_init__(self) -> None:
        eps = tuple(float(e) for e in self.epsilons)
        if not eps:
            raise ContractError("an oscillating sequence needs at least one epsilon")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ContractError(f"epsilons must be strictly decreasing, got {eps}")
        object.__setattr__(self, "epsilons", eps)
        for e in eps:
            self.grid_for(e)

    def grid_for(self, epsilon: float) -> MacroGrid:
        if self.points_per_period is not None:
            cells = resolving_cells(epsilon, self.grid.length, self.points_per_period)
            return self.grid.with_cells(cells)
        check_commensurate(epsilon, self.grid.length, self.grid.n_cells)
        return self.grid

    def sample(self, epsilon: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Midpoints ``x`` with their ``(y, z)`` images and ``u_eps(x)``."""
        x = self.grid_for(epsilon).midpoints()
        y, z = ScaleMap(epsilon).sample(x)
        return x, y, z, np.asarray(self.generator(x, y, z), dtype=float)


@dataclass(frozen=True)
class CorrectorTriple:
    """``u`` on Omega, ``U`` on Omega x Y and ``W`` on Omega x Y x Z (1-D, order 2).

    ``u(x)``, ``U(x, y)`` and ``W(x, y, z)`` take arrays shaped ``(..., 1)``.
    """

    u: Callable[[np.ndarray], np.ndarray]
    U: Callable[[np.ndarray, np.ndarray], np.ndarray]
    W: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    order: int = 2

    def __post_init__(self) -> None:
        if self.order != 2:
            raise ContractError("corrector triples describe second-order sequences")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class PairingRow(BaseModel):
    """One epsilon of a pairing study; also the CSV row layout."""

    epsilon: float
    pairing: float
    target: float | None = None
    residual: float | None = None


class PairingReport(BaseModel):
    sequence: str
    test: str
    rows: list[PairingRow] = Field(default_factory=list)
    target: float | None = Field(None, description="Triple integral of v * test.")
    limit_estimate: float = Field(description="Richardson-extrapolated pairing limit.")
    fitted_order: float | None = Field(
        None, description="Least-squares log-log slope of residuals; None at the noise floor."
    )


class NormRow(BaseModel):
    epsilon: float
    norm: float
    target: float
    residual: float


class NormReport(BaseModel):
    sequence: str
    nfunction: str
    rows: list[NormRow] = Field(default_factory=list)
    target: float = Field(description="Luxemburg norm of v on Omega x Y x Z.")

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.rows), default=0.0)


class AveragingRow(BaseModel):
    epsilon: float
    pairing_xy: float
    residual_xy: float
    pairing_x: float
    residual_x: float


class AveragingReport(BaseModel):
    """Pairings with z-free and (y, z)-free tests against averaged limits."""

    sequence: str
    rows: list[AveragingRow] = Field(default_factory=list)
    target_xy: float = Field(description="int int (int_Z v dz) test_xy dx dy.")
    target_x: float = Field(description="int (int int v dy dz) test_x dx.")
    consistency_gap: float = Field(
        description="Gap between averaged targets and the triple integrals they reduce."
    )


class RecoveryReport(BaseModel):
    epsilon: float
    gradient_defect: float = Field(description="Discrete sup-norm gradient defect.")
    defect_constant: float = Field(description="gradient_defect / epsilon.")
    distance: float = Field(description="Sup-norm distance of the recovery from u.")


class HessianRow(BaseModel):
    epsilon: float
    grid_points: int
    pairing: float
    target: float
    residual: float


class HessianReport(BaseModel):
    """Pairings of the discrete hessian of ``u_eps`` against the two-scale limit."""

    rows: list[HessianRow] = Field(default_factory=list)
    target: float
    monotone: bool = Field(description="Residuals decrease along the epsilon list.")
    fitted_order: float | None = None
