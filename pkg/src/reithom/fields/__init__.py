"""Periodic sampled fields, macro grids and their persistence."""

from reithom.fields.differentiation import SCHEMES, Scheme
from reithom.fields.grid import (
    BoundaryData,
    MacroGrid,
    check_commensurate,
    dyadic_exponent,
    resolving_cells,
)
from reithom.fields.io import export_csv, load_field, save_field
from reithom.fields.periodic import (
    Cells,
    PeriodicField,
    cell_points,
    gradient,
    hessian,
    integrate,
    project_mean_zero,
    wrap,
)

__all__ = [
    # Fields
    "Cells",
    "PeriodicField",
    "cell_points",
    "wrap",
    "integrate",
    "gradient",
    "hessian",
    "project_mean_zero",
    "SCHEMES",
    "Scheme",
    # Grids
    "BoundaryData",
    "MacroGrid",
    "check_commensurate",
    "dyadic_exponent",
    "resolving_cells",
    # Persistence
    "save_field",
    "load_field",
    "export_csv",
]
