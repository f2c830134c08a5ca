"""CLI commands for the `reithom cell` subgroup."""

from __future__ import annotations

import click
import numpy as np

from reithom import logger
from reithom.cell.models import CellProblem, CellSolution, SolverParams, free_indices
from reithom.cell.solver import solve_inner, solve_outer, tabulate, tabulate_outer
from reithom.cell.table import load_table, normalize_lattice, save_table
from reithom.errors import NonConvergenceError
from reithom.fields.io import save_field
from reithom.integrand.catalog import catalog
from reithom.ui.loading_bar import LoadingBar
from reithom.ui.table import Table, TableColumn, fmt_value
from reithom.utils.cli import (
    get_options,
    parse_float_list,
    parse_lattice,
    parse_params,
    reports_errors,
)

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _integrand(ctx: click.Context, name: str, params: tuple[str, ...], order: int | None):
    values = parse_params(params)
    if order is not None:
        values["order"] = order
    return catalog(name, values, seed=get_options(ctx).seed)


def _show(title: str, sol: CellSolution) -> None:
    table = Table(
        title,
        [TableColumn("quantity", style="bold cyan"), TableColumn("value", justify="right")],
    )
    table.add_row(["energy", fmt_value(sol.energy)])
    table.add_row(["mean flux", np.array2string(sol.mean_flux.ravel(), precision=6)])
    table.add_row(["iterations", sol.iterations])
    table.add_row(["grad norm", fmt_value(sol.final_grad_norm)])
    table.add_row(["converged", fmt_value(sol.converged)], style=None if sol.converged else "red")
    table.render()


def _flag(ctx: click.Context, converged: bool, what: str) -> None:
    if converged:
        return
    logger.warning(f"{what} did not converge")
    if get_options(ctx).strict:
        raise NonConvergenceError(f"{what} did not converge")


integrand_option = click.option(
    "--integrand", "integrand_name", required=True, help="Catalog integrand name."
)
param_option = click.option(
    "-p",
    "--param",
    "params",
    multiple=True,
    help="Integrand parameter KEY=VALUE (repeatable), e.g. -p p=3.",
)
order_option = click.option(
    "--order", type=click.IntRange(1, 2), default=None, help="Derivative order s."
)
scheme_option = click.option(
    "--scheme",
    type=click.Choice(["central", "spectral"]),
    default="central",
    show_default=True,
    help="Cell differentiation scheme.",
)


# ---------------------------------------------------------------------------
# Group
# ---------------------------------------------------------------------------


@click.group()
def cell() -> None:
    """Solve inner and outer periodic cell problems and tabulate f_hom."""


# ---------------------------------------------------------------------------
# inner
# ---------------------------------------------------------------------------


@cell.command()
@integrand_option
@param_option
@order_option
@scheme_option
@click.option("--xi", required=True, help="Comma-separated entries of xi (row-major).")
@click.option("--y", "y", default="0", show_default=True, help="Frozen slow point y.")
@click.option("--res", default=256, show_default=True, help="Points per Z axis.")
@click.option("--out", type=click.Path(), default=None, help="Write the corrector field here.")
@click.pass_context
@reports_errors
def inner(ctx, integrand_name, params, order, scheme, xi, y, res, out) -> None:
    """Compute f_hom(y, xi) and the inner corrector psi on Z."""
    ig = _integrand(ctx, integrand_name, params, order)
    cp = CellProblem(
        ig,
        "inner",
        np.array(parse_float_list(xi)),
        res,
        frozen_y=parse_float_list(y),
        scheme=scheme,
    )
    sol = solve_inner(cp)
    _show(f"f_hom for {ig.label} at y={y}, xi={xi}", sol)
    if out:
        path = save_field(sol.corrector, get_options(ctx).out_dir / out, {"energy": sol.energy})
        click.echo(f"✓ Corrector written to {path}")
    _flag(ctx, sol.converged, "inner cell problem")


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


@cell.command("table")
@integrand_option
@param_option
@order_option
@scheme_option
@click.option(
    "--xi-range", required=True, help="Lattice LO:HI:COUNT per free xi coordinate, ';'-separated."
)
@click.option("--y-samples", default=64, show_default=True, help="y samples per axis.")
@click.option("--res", default=256, show_default=True, help="Points per Z axis.")
@click.option(
    "--outer-res",
    type=int,
    default=None,
    help="Also tabulate f_hom_bar on the same lattice at this Y resolution (<out>_outer).",
)
@click.option("-o", "--out", required=True, type=click.Path(), help="Table file base name.")
@click.pass_context
@reports_errors
def table_command(
    ctx, integrand_name, params, order, scheme, xi_range, y_samples, res, outer_res, out
):
    """Tabulate f_hom(y, xi) on y samples times a xi lattice."""
    options = get_options(ctx)
    ig = _integrand(ctx, integrand_name, params, order)
    axes = normalize_lattice(parse_lattice(xi_range), len(free_indices(ig)))
    total = int(np.prod([a.count for a in axes]))
    with LoadingBar(f"Tabulating {ig.label}", total=total) as bar:
        table = tabulate(
            ig,
            axes,
            y_samples,
            res,
            params=SolverParams(),
            scheme=scheme,
            jobs=options.jobs,
            on_progress=bar.on_progress,
        )
    path = save_table(table, options.out_dir / out)
    click.echo(f"✓ Table {table.values.shape} written to {path}")
    _flag(ctx, table.all_converged, f"table {table.label}")
    if outer_res is None:
        return

    with LoadingBar(f"Tabulating f_hom_bar for {ig.label}", total=total) as bar:
        outer_table = tabulate_outer(
            table,
            ig,
            axes,
            outer_res,
            scheme=scheme,
            jobs=options.jobs,
            on_progress=bar.on_progress,
        )
    path = save_table(outer_table, options.out_dir / f"{out}_outer")
    click.echo(f"✓ Outer table {outer_table.values.shape} written to {path}")
    _flag(ctx, outer_table.all_converged, f"table {outer_table.label}")


# ---------------------------------------------------------------------------
# outer
# ---------------------------------------------------------------------------


@cell.command()
@click.option("--table", "table_file", required=True, type=click.Path(), help="Inner table.")
@click.option("--xi", required=True, help="Comma-separated entries of xi.")
@click.option(
    "--integrand",
    "integrand_name",
    default=None,
    help="Integrand name (defaults to the one recorded in the table).",
)
@param_option
@click.option("--res", default=256, show_default=True, help="Points per Y axis.")
@click.pass_context
@reports_errors
def outer(ctx, table_file, xi, integrand_name, params, res) -> None:
    """Compute f_hom_bar(xi) from an inner table."""
    table = load_table(table_file)
    if integrand_name:
        ig = catalog(integrand_name, parse_params(params), seed=get_options(ctx).seed)
    else:
        ig = catalog(table.integrand_name, table.integrand_params, check=False)
    cp = CellProblem(
        ig, "outer", np.array(parse_float_list(xi)), res, table=table, scheme=table.scheme
    )
    sol = solve_outer(cp, jobs=get_options(ctx).jobs)
    _show(f"f_hom_bar for {table.label} at xi={xi}", sol)
    _flag(ctx, sol.converged, "outer cell problem")
