"""CLI commands for the `reithom gamma` subgroup."""

from __future__ import annotations

import click

from reithom import logger
from reithom.cell.table import load_table
from reithom.errors import NonConvergenceError
from reithom.experiment.report import emit_report
from reithom.gamma.models import StudyRow
from reithom.gamma.study import boundary_grid, convergence_study
from reithom.integrand.catalog import catalog
from reithom.ui.loading_bar import LoadingBar
from reithom.ui.table import Table
from reithom.utils.cli import (
    get_options,
    parse_eps_list,
    parse_float_list,
    parse_params,
    reports_errors,
)


@click.group()
def gamma() -> None:
    """Minimize F_eps directly and compare with the homogenized minimum."""


@gamma.command()
@click.option("--integrand", "integrand_name", required=True, help="Catalog integrand name.")
@click.option("-p", "--param", "params", multiple=True, help="Integrand parameter KEY=VALUE.")
@click.option("--order", type=click.IntRange(1, 2), default=None, help="Derivative order s.")
@click.option("--xi0", required=True, help="Boundary slope (s=1) or curvature (s=2) entries.")
@click.option("--eps", "eps_text", required=True, help="Epsilon list, e.g. 2^-2..2^-6.")
@click.option("--res-per-period", default=16, show_default=True, help="Nodes per eps^2.")
@click.option("--length", default=1.0, show_default=True, help="Side L of the box (0, L)^N.")
@click.option("--table", "table_file", type=click.Path(), default=None, help="Outer table.")
@click.option("-o", "--out", type=click.Path(), default=None, help="Study CSV file.")
@click.option("--summary", type=click.Path(), default=None, help="Study JSON summary file.")
@click.pass_context
@reports_errors
def study(
    ctx,
    integrand_name,
    params,
    order,
    xi0,
    eps_text,
    res_per_period,
    length,
    table_file,
    out,
    summary,
) -> None:
    """Run min F_eps along the epsilon list against the homogenized minimum."""
    options = get_options(ctx)
    values = parse_params(params)
    if order is not None:
        values["order"] = order
    ig = catalog(integrand_name, values, seed=options.seed)
    slope = parse_float_list(xi0)
    grid = boundary_grid(ig, slope, length)
    table = load_table(table_file) if table_file else None
    epsilons = parse_eps_list(eps_text)

    with LoadingBar(f"Gamma study {ig.label}", total=len(epsilons)) as bar:
        result = convergence_study(
            ig,
            grid,
            epsilons,
            table=table,
            res_per_period=res_per_period,
            jobs=options.jobs,
            on_progress=bar.on_progress,
        )

    rows = result.rows()
    title = f"Gamma study {ig.label} (hom = {result.homogenized_value:.10g})"
    Table.from_models(title, rows).render()
    if out:
        path = emit_report(rows, "csv", options.out_dir / out, row_model=StudyRow)
        click.echo(f"✓ Study written to {path}")
    if summary:
        path = emit_report(result.summary(integrand_name, slope), "json", options.out_dir / summary)
        click.echo(f"✓ Summary written to {path}")

    flagged = [r.epsilon for r in result.runs if not r.converged]
    if flagged:
        logger.warning(f"unconverged runs at eps={flagged}")
        if options.strict:
            raise NonConvergenceError(f"unconverged runs at eps={flagged}")
