"""CLI commands for the `reithom twoscale` subgroup."""

from __future__ import annotations

import click

from reithom import logger
from reithom.errors import NonConvergenceError
from reithom.experiment.report import emit_report
from reithom.orlicz.catalog import nfunction_from_spec
from reithom.twoscale.hessian import verify_theorem1
from reithom.twoscale.models import HessianRow, NormRow, PairingRow
from reithom.twoscale.pairing import luxemburg_limit_check, two_scale_pair
from reithom.twoscale.sequences import (
    DEFAULT_POINTS_PER_PERIOD,
    SEQUENCES,
    TESTS,
    TRIPLES,
    make_sequence,
    named_test,
    named_triple,
)
from reithom.ui.table import Table
from reithom.utils.cli import get_options, parse_eps_list, reports_errors

seq_option = click.option(
    "--seq", "seq_name", required=True, type=click.Choice(sorted(SEQUENCES)), help="Sequence."
)
eps_option = click.option(
    "--eps", "eps_text", required=True, help="Epsilon list, e.g. 2^-3..2^-7 or 0.25,0.125."
)
ppp_option = click.option(
    "--points-per-period",
    default=DEFAULT_POINTS_PER_PERIOD,
    show_default=True,
    help="Grid points per fast period eps^2.",
)
out_option = click.option("-o", "--out", type=click.Path(), default=None, help="CSV output file.")


@click.group()
def twoscale() -> None:
    """Reiterated two-scale pairings, norm limits and hessian decompositions."""


@twoscale.command()
@seq_option
@click.option("--test", "test_name", required=True, type=click.Choice(sorted(TESTS)))
@eps_option
@ppp_option
@out_option
@click.pass_context
@reports_errors
def pair(ctx, seq_name, test_name, eps_text, points_per_period, out) -> None:
    """Pair u_eps with test(x, x/eps, x/eps^2) along the epsilon list."""
    options = get_options(ctx)
    seq = make_sequence(seq_name, parse_eps_list(eps_text), points_per_period=points_per_period)
    report = two_scale_pair(seq, named_test(test_name), test_name, jobs=options.jobs)
    Table.from_models(f"{seq_name} x {test_name}", report.rows).render()
    click.echo(f"limit estimate: {report.limit_estimate:.10g}")
    if out:
        path = emit_report(report.rows, "csv", options.out_dir / out, row_model=PairingRow)
        click.echo(f"✓ Pairings written to {path}")


@twoscale.command()
@seq_option
@click.option("--nfunction", "nf_spec", default="power:2", show_default=True, help="N-function.")
@eps_option
@ppp_option
@out_option
@click.pass_context
@reports_errors
def norm(ctx, seq_name, nf_spec, eps_text, points_per_period, out) -> None:
    """Luxemburg norms of u_eps against the norm of the generator on the triple domain."""
    options = get_options(ctx)
    seq = make_sequence(seq_name, parse_eps_list(eps_text), points_per_period=points_per_period)
    report = luxemburg_limit_check(seq, nfunction_from_spec(nf_spec), jobs=options.jobs)
    Table.from_models(f"||{seq_name}||_{nf_spec}", report.rows).render()
    if out:
        path = emit_report(report.rows, "csv", options.out_dir / out, row_model=NormRow)
        click.echo(f"✓ Norms written to {path}")


@twoscale.command()
@click.option("--triple", "triple_name", required=True, type=click.Choice(sorted(TRIPLES)))
@click.option("--test", "test_name", required=True, type=click.Choice(sorted(TESTS)))
@eps_option
@click.option("--res-per-period", default=32, show_default=True, help="Points per eps^2.")
@out_option
@click.pass_context
@reports_errors
def hessian(ctx, triple_name, test_name, eps_text, res_per_period, out) -> None:
    """Pair the discrete hessian of a second-order sequence with a test function."""
    options = get_options(ctx)
    report = verify_theorem1(
        named_triple(triple_name),
        parse_eps_list(eps_text),
        named_test(test_name),
        res_per_period=res_per_period,
        jobs=options.jobs,
    )
    Table.from_models(f"D^2 {triple_name} x {test_name}", report.rows).render()
    if out:
        path = emit_report(report.rows, "csv", options.out_dir / out, row_model=HessianRow)
        click.echo(f"✓ Hessian pairings written to {path}")
    if not report.monotone:
        logger.warning("hessian residuals are not monotone")
        if options.strict:
            raise NonConvergenceError("hessian residuals are not monotone")
