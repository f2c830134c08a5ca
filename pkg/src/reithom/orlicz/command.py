"""CLI commands for the `reithom nfunction` subgroup."""

from __future__ import annotations

import click

from reithom.experiment.report import emit_report
from reithom.orlicz.catalog import nfunction_from_spec
from reithom.orlicz.check import check_nfunction
from reithom.ui.table import Table, TableColumn, fmt_value
from reithom.utils.cli import get_options, reports_errors


@click.group()
def nfunction() -> None:
    """Inspect catalog N-functions."""


@nfunction.command()
@click.argument("name")
@click.option("--t-min", default=1e-2, show_default=True, help="Smallest sampled t.")
@click.option("--t-max", default=1e2, show_default=True, help="Largest sampled t.")
@click.option("--samples", default=64, show_default=True, help="Geometric grid size.")
@click.option("-o", "--out", type=click.Path(), default=None, help="Write the JSON report here.")
@click.pass_context
@reports_errors
def check(ctx, name, t_min, t_max, samples, out) -> None:
    """Delta_2 verdicts, invariants and samples of NAME (power:p, plog:p,q, exp)."""
    report = check_nfunction(
        nfunction_from_spec(name), t_min, t_max, samples, seed=get_options(ctx).seed
    )

    table = Table(
        f"N-function {report.label}",
        [TableColumn("check", style="bold cyan"), TableColumn("result", justify="right")],
    )
    table.add_row(["delta2", fmt_value(report.delta2.holds)])
    table.add_row(["alpha", fmt_value(report.delta2.alpha)])
    if report.delta2_conjugate is not None:
        table.add_row(["conjugate delta2", fmt_value(report.delta2_conjugate.holds)])
    for c in report.invariants.checks:
        table.add_row([c.name, fmt_value(c.passed)], style=None if c.passed else "red")
    table.render()

    if out:
        path = emit_report(report, "json", get_options(ctx).out_dir / out)
        click.echo(f"✓ Report written to {path}")
    else:
        click.echo(report.model_dump_json(indent=2))
