import click

from reithom.cell.command import cell
from reithom.config import config_group, resolve_options
from reithom.experiment.command import run_command
from reithom.gamma.command import gamma
from reithom.orlicz.command import nfunction
from reithom.twoscale.command import twoscale
from reithom.utils.cli import reports_errors
from reithom.utils.logger import setup_logger

setup_logger()


@click.group()
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker threads.")
@click.option("--strict", is_flag=True, help="Exit non-zero when any result is flagged.")
@click.option("--seed", type=int, default=None, help="Seed for sampled checks.")
@click.option(
    "--out-dir", type=click.Path(file_okay=False), default=None, help="Directory for outputs."
)
@click.pass_context
@reports_errors
def main(ctx, jobs, strict, seed, out_dir) -> None:
    """reithom – reiterated homogenization of Orlicz-growth integrals."""
    ctx.obj = resolve_options(jobs, strict, seed, out_dir)


main.add_command(nfunction)
main.add_command(cell)
main.add_command(twoscale)
main.add_command(gamma)
main.add_command(run_command)
main.add_command(config_group)
