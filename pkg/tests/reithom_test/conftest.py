"""Shared factories for reithom unit tests."""

import numpy as np
import pytest

from reithom.cell.models import LatticeAxis
from reithom.cell.table import HomTable, empty_table, populate
from reithom.fields.grid import BoundaryData, MacroGrid, resolving_cells
from reithom.integrand.catalog import catalog
from reithom.integrand.models import Integrand
from reithom.utils.cli import RunOptions

# ---------------------------------------------------------------------------
# Factories / Builders
# ---------------------------------------------------------------------------


def make_integrand(name: str = "quadratic_laminate", **params) -> Integrand:
    """Catalog integrand without the sampled hypothesis checks."""
    return catalog(name, params, check=False)


def make_grid(
    epsilon: float = 0.25,
    slope: float = 1.0,
    length: float = 1.0,
    res_per_period: int = 16,
    quadratic: bool = False,
) -> MacroGrid:
    """1-D macro grid resolving ``epsilon`` with affine (or quadratic) data."""
    data = BoundaryData.quadratic(slope) if quadratic else BoundaryData.affine(slope)
    return MacroGrid(length, resolving_cells(epsilon, length, res_per_period), 1, data)


def make_quadratic_table(
    lo: float = -2.0,
    hi: float = 2.0,
    count: int = 9,
    level: str = "outer",
    scale: float = 1.0,
) -> HomTable:
    """Order-1 scalar table of ``scale * xi^2`` (flux ``2 scale xi``) in every y column.

    Filled by an analytic node solver so no cell problem is run.
    """
    n_y = 1 if level == "outer" else 4
    y_points = np.zeros((1, 1)) if level == "outer" else (np.arange(4)[:, None] + 0.5) / 4 - 0.5
    table = empty_table(
        label=f"{scale:g} xi^2",
        level=level,
        order=1,
        dims=(1, 1),
        axes=[LatticeAxis(lo=lo, hi=hi, count=count)],
        y_points=y_points,
        resolution=64,
        scheme="central",
        integrand_name="constant_B",
        integrand_params={"nf": "plog:2,0"},
    )

    def solve_node(xi: np.ndarray):
        energy = np.full(n_y, scale * float(xi.ravel()[0]) ** 2)
        flux = np.broadcast_to(2.0 * scale * xi, (n_y,) + xi.shape)
        return energy, flux, np.ones(n_y, dtype=bool)

    return populate(table, solve_node)


def make_options(tmp_path, **overrides) -> RunOptions:
    return RunOptions(out_dir=tmp_path, **overrides)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


@pytest.fixture
def laminate() -> Integrand:
    return make_integrand("quadratic_laminate")


@pytest.fixture
def quadratic_table() -> HomTable:
    return make_quadratic_table()
