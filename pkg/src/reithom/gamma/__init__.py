"""Direct minimization of F_eps and Gamma-convergence studies."""

from reithom.gamma.direct import energy_of, minimize_on_grid, solve_epsilon
from reithom.gamma.models import ConvergenceStudy, EpsilonRun, StudyRow, StudySummary
from reithom.gamma.study import boundary_grid, convergence_study, homogenized_minimum

__all__ = [
    "ConvergenceStudy",
    "EpsilonRun",
    "StudyRow",
    "StudySummary",
    "boundary_grid",
    "convergence_study",
    "energy_of",
    "homogenized_minimum",
    "minimize_on_grid",
    "solve_epsilon",
]
