"""Direct minimizations of ``F_eps`` and the studies built from them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field

from reithom.errors import ContractError
from reithom.fields.grid import MacroGrid


@dataclass(frozen=True)
class EpsilonRun:
    """One minimization of ``F_eps`` on ``grid`` with pinned Dirichlet nodes.

    ``minimizer`` holds node values, shape ``(n_points,)*N + (d,)``.
    """

    epsilon: float
    grid: MacroGrid
    minimizer: np.ndarray
    energy: float
    iterations: int
    grad_norm: float
    converged: bool
    stop_reason: str = ""


class StudyRow(BaseModel):
    """CSV layout of a convergence study."""

    epsilon: float
    grid_points: int
    F_eps_min: float
    oracle_min: float | None = None
    hom_value: float
    residual: float
    iterations: int
    converged: bool = True


class StudySummary(BaseModel):
    """JSON summary written next to the study CSV."""

    integrand: str
    order: int
    xi0: list[float]
    hom_value: float
    fitted_rate: float | None = Field(
        None, description="Log-log slope of residual against eps; descriptive only."
    )
    extrapolated: bool = Field(
        False, description="True for s=2 studies, whose limit is checked against a 1-D oracle."
    )
    max_oracle_gap: float | None = Field(
        None, description="Largest relative gap between F_eps_min and the discrete oracle."
    )
    all_converged: bool
    rows: list[StudyRow] = Field(default_factory=list)


@dataclass(frozen=True)
class ConvergenceStudy:
    label: str
    runs: tuple[EpsilonRun, ...]
    homogenized_value: float
    oracle_values: tuple[float | None, ...]
    fitted_rate: float | None
    order: int = 1

    def __post_init__(self) -> None:
        eps = [r.epsilon for r in self.runs]
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ContractError(f"study epsilons must be strictly decreasing, got {eps}")
        if len(self.oracle_values) != len(self.runs):
            raise ContractError("one oracle value per run is required")

    @property
    def residuals(self) -> list[float]:
        return [abs(r.energy - self.homogenized_value) for r in self.runs]

    @property
    def extrapolated(self) -> bool:
        return self.order == 2

    def rows(self) -> list[StudyRow]:
        return [
            StudyRow(
                epsilon=run.epsilon,
                grid_points=run.grid.total_nodes,
                F_eps_min=run.energy,
                oracle_min=oracle,
                hom_value=self.homogenized_value,
                residual=residual,
                iterations=run.iterations,
                converged=run.converged,
            )
            for run, oracle, residual in zip(self.runs, self.oracle_values, self.residuals)
        ]

    def oracle_gaps(self) -> list[float]:
        return [
            abs(run.energy - oracle) / max(abs(oracle), 1e-12)
            for run, oracle in zip(self.runs, self.oracle_values)
            if oracle is not None
        ]

    def summary(self, integrand: str, xi0: np.ndarray) -> StudySummary:
        gaps = self.oracle_gaps()
        return StudySummary(
            integrand=integrand,
            order=self.order,
            xi0=[float(v) for v in np.ravel(xi0)],
            hom_value=self.homogenized_value,
            fitted_rate=self.fitted_rate,
            extrapolated=self.extrapolated,
            max_oracle_gap=max(gaps) if gaps else None,
            all_converged=all(r.converged for r in self.runs),
            rows=self.rows(),
        )
