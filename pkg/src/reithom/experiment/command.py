"""CLI command `reithom run CONFIG.json`."""

from __future__ import annotations

import click

from reithom.errors import NonConvergenceError
from reithom.experiment.models import load_config
from reithom.experiment.runner import run
from reithom.ui.table import Table, TableColumn, fmt_value
from reithom.utils.cli import get_options, reports_errors


@click.command("run")
@click.argument("config_file", type=click.Path())
@click.pass_context
@reports_errors
def run_command(ctx, config_file) -> None:
    """Run the experiment described by CONFIG_FILE (JSON) and write its reports."""
    options = get_options(ctx)
    config = load_config(config_file)
    summary = run(config, options)

    table = Table(
        f"{summary.kind} '{summary.name}' (seed {summary.seed})",
        [TableColumn("value", style="bold cyan"), TableColumn("result", justify="right")],
    )
    for key, value in summary.values.items():
        table.add_row([key, fmt_value(value)])
    table.render()
    for path in summary.files:
        click.echo(f"✓ {path}")

    if summary.flagged:
        click.echo(f"⚠ flagged: {', '.join(summary.flagged)}", err=True)
        if options.strict:
            raise NonConvergenceError(f"flagged results: {', '.join(summary.flagged)}")
