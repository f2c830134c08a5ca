"""User defaults and experiment-config management commands."""

import os
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 backport
    import tomli as tomllib
from pathlib import Path

import click
from pydantic import BaseModel, Field, ValidationError

from reithom import logger
from reithom.cell.models import LatticeAxis
from reithom.errors import ConfigError, ReportIOError
from reithom.experiment.models import (
    KINDS,
    CellInnerConfig,
    CellOuterConfig,
    CorrectorConfig,
    ExperimentConfig,
    GammaStudyConfig,
    HomTableConfig,
    IntegrandSpec,
    NFunctionCheckConfig,
    TwoScaleConfig,
    dump_config,
    load_config,
)
from reithom.utils.cli import RunOptions, reports_errors

JOBS_ENV = "REITHOM_JOBS"
SEED_ENV = "REITHOM_SEED"


class Defaults(BaseModel):
    """``[defaults]`` section of ``~/.reithom/config.toml``."""

    jobs: int | None = Field(None, ge=1, description="Worker threads when --jobs is absent.")
    seed: int | None = Field(None, description="Seed when --seed is absent.")
    out_dir: Path | None = Field(None, description="Output directory when --out-dir is absent.")


def get_config_file() -> Path:
    return Path.home() / ".reithom" / "config.toml"


def load_defaults(config_file: Path | None = None) -> Defaults:
    """Read ``[defaults]``; a missing or unreadable file yields empty defaults."""
    config_file = config_file or get_config_file()
    if not config_file.exists():
        return Defaults()
    try:
        with open(config_file, "rb") as f:
            data = tomllib.load(f)
        defaults = Defaults.model_validate(data.get("defaults", {}))
        logger.debug(f"Loaded defaults from {config_file}")
        return defaults
    except (OSError, tomllib.TOMLDecodeError, ValidationError) as e:
        logger.warning(f"Failed to load config file {config_file}: {e}")
        return Defaults()


def _env_int(name: str) -> int | None:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'")


def resolve_options(
    jobs: int | None = None,
    strict: bool = False,
    seed: int | None = None,
    out_dir: str | Path | None = None,
    defaults: Defaults | None = None,
) -> RunOptions:
    """Global options with precedence: CLI flag > env var > TOML defaults > built-in."""
    defaults = defaults or load_defaults()

    def pick(flag, env_name: str | None, default):
        if flag is not None:
            return flag
        env = _env_int(env_name) if env_name else None
        if env is not None:
            return env
        return default

    values = {
        "jobs": pick(jobs, JOBS_ENV, defaults.jobs),
        "seed": pick(seed, SEED_ENV, defaults.seed),
        "out_dir": pick(out_dir, None, defaults.out_dir),
    }
    try:
        return RunOptions(strict=strict, **{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        raise ConfigError(f"invalid global options: {e.errors(include_url=False)}") from e


# ---------------------------------------------------------------------------
# Example experiments
# ---------------------------------------------------------------------------

_LAMINATE = IntegrandSpec(name="quadratic_laminate")
_LATTICE = [LatticeAxis(lo=-2.0, hi=2.0, count=9)]


def example_config(kind: str) -> ExperimentConfig:
    """A small runnable experiment of ``kind``."""
    examples = {
        "nfunction-check": lambda: NFunctionCheckConfig(
            kind="nfunction-check", name="exp_check", nfunction="exp"
        ),
        "cell-inner": lambda: CellInnerConfig(
            kind="cell-inner", name="laminate_inner", integrand=_LAMINATE, xi=[1.0]
        ),
        "cell-outer": lambda: CellOuterConfig(
            kind="cell-outer",
            name="laminate_outer",
            integrand=_LAMINATE,
            xi=[1.0],
            lattice=_LATTICE,
        ),
        "hom-table": lambda: HomTableConfig(
            kind="hom-table",
            name="laminate_table",
            integrand=_LAMINATE,
            lattice=_LATTICE,
            outer_resolution=256,
        ),
        "twoscale": lambda: TwoScaleConfig(
            kind="twoscale",
            name="cos_fast",
            sequence="cos_fast",
            tests=["one", "cos_z"],
            epsilons="2^-3..2^-5",
            nfunction="plog:2,0",
        ),
        "corrector": lambda: CorrectorConfig(
            kind="corrector",
            name="fast_hessian",
            triple="fast",
            test="cos_z",
            epsilons="2^-3..2^-5",
        ),
        "gamma-study": lambda: GammaStudyConfig(
            kind="gamma-study",
            name="laminate_study",
            integrand=_LAMINATE,
            xi0=[1.0],
            epsilons="2^-2..2^-5",
        ),
    }
    try:
        return examples[kind]()
    except KeyError:
        raise ConfigError(f"unknown experiment kind '{kind}' (known: {', '.join(KINDS)})")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@click.group("config")
def config_group() -> None:
    """Write and validate experiment configs."""


@config_group.command("init")
@click.argument("kind", type=click.Choice(KINDS))
@click.argument("config_file", type=click.Path())
@reports_errors
def init_config(kind: str, config_file: str) -> None:
    """Write an example KIND experiment to CONFIG_FILE.

    Every field is written out, defaults included, so the file documents the schema.
    """
    path = Path(config_file)
    if path.exists():
        click.echo(f"⚠️  {path} already exists; not overwriting")
        raise click.exceptions.Exit(1)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_config(example_config(kind)), encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"cannot write {path}: {e}") from e
    click.echo(f"✓ Created {kind} experiment: {path}")
    click.echo(f"\nRun it with 'reithom run {path}'.")


@config_group.command("show")
@click.argument("config_file", type=click.Path())
@reports_errors
def show_config(config_file: str) -> None:
    """Validate CONFIG_FILE and print it with every default filled in."""
    config = load_config(config_file)
    click.echo(f"✓ Valid {config.kind} experiment '{config.name}'\n")
    click.echo(dump_config(config), nl=False)

    defaults = load_defaults()
    set_values = defaults.model_dump(exclude_none=True)
    if set_values:
        click.echo(f"\nUser defaults from {get_config_file()}:")
        for key, value in set_values.items():
            click.echo(f"  • {key}: {value}")
