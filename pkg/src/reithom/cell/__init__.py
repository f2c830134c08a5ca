"""Inner and outer periodic cell problems, homogenized tables and 1-D oracles."""

from reithom.cell.minimize import MinimizeResult, minimize_bb
from reithom.cell.models import CellProblem, CellSolution, LatticeAxis, SolverParams
from reithom.cell.operators import PeriodicOperator
from reithom.cell.oracle import (
    clamped_oracle_s2,
    constant_flux_value,
    dirichlet_oracle_s1,
    harmonic_mean,
    inner_oracle,
    p_harmonic_mean,
    reiterated_oracle,
)
from reithom.cell.solver import (
    ReiteratedCorrectors,
    extend_inner_table,
    reiterated_correctors,
    solve_inner,
    solve_inner_batch,
    solve_outer,
    tabulate,
    tabulate_outer,
)
from reithom.cell.table import HomTable, eval_interp, load_table, save_table

__all__ = [
    # Problems
    "CellProblem",
    "CellSolution",
    "LatticeAxis",
    "SolverParams",
    "PeriodicOperator",
    "MinimizeResult",
    "minimize_bb",
    # Operations
    "solve_inner",
    "solve_inner_batch",
    "solve_outer",
    "tabulate",
    "tabulate_outer",
    "extend_inner_table",
    "reiterated_correctors",
    "ReiteratedCorrectors",
    # Tables
    "HomTable",
    "eval_interp",
    "load_table",
    "save_table",
    # Oracles
    "clamped_oracle_s2",
    "constant_flux_value",
    "dirichlet_oracle_s1",
    "harmonic_mean",
    "inner_oracle",
    "p_harmonic_mean",
    "reiterated_oracle",
]
