"""Shared click plumbing: argument parsers, global options and error reporting."""

from __future__ import annotations

import functools
import re
from pathlib import Path
from typing import Callable

import click
from pydantic import BaseModel, Field

from reithom import logger
from reithom.errors import ReithomError


class RunOptions(BaseModel):
    """Global flags of the root command, stored on the click context."""

    jobs: int = Field(1, ge=1, description="Worker threads for independent solves.")
    strict: bool = Field(False, description="Exit non-zero when any result is flagged.")
    seed: int = Field(0, description="Seed for every sampled check.")
    out_dir: Path = Field(Path("."), description="Directory for reports and tables.")


def get_options(ctx: click.Context) -> RunOptions:
    obj = ctx.find_root().obj
    return obj if isinstance(obj, RunOptions) else RunOptions()


def reports_errors(fn: Callable) -> Callable:
    """Turn escaping ReithomErrors into a JSON line on stderr and the error's exit code."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ReithomError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(e.to_json(), err=True)
            raise click.exceptions.Exit(e.exit_code)

    return wrapper


# ---------------------------------------------------------------------------
# Parsers
# ---------------------------------------------------------------------------

_POWER = re.compile(r"^\s*2\^(-?\d+)\s*$")


def parse_float(text: str) -> float:
    """A float, also accepting ``2^k``."""
    match = _POWER.match(text)
    if match:
        return 2.0 ** int(match.group(1))
    try:
        return float(text)
    except ValueError:
        raise click.BadParameter(f"'{text}' is not a number")


def parse_float_list(text: str) -> list[float]:
    return [parse_float(part) for part in text.split(",") if part.strip()]


def parse_eps_list(text: str) -> list[float]:
    """``2^-2..2^-5`` (every dyadic step) or a comma-separated list."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        a, b = _POWER.match(lo), _POWER.match(hi)
        if not (a and b):
            raise click.BadParameter(f"range '{text}' must look like 2^-2..2^-5")
        start, stop = int(a.group(1)), int(b.group(1))
        step = -1 if stop < start else 1
        return [2.0**k for k in range(start, stop + step, step)]
    return parse_float_list(text)


def parse_lattice(text: str) -> list[dict]:
    """``LO:HI:COUNT`` per free coordinate, separated by ``;``."""
    axes = []
    for part in text.split(";"):
        fields = part.split(":")
        if len(fields) != 3:
            raise click.BadParameter(f"lattice axis '{part}' must be LO:HI:COUNT")
        try:
            axes.append(
                {
                    "lo": parse_float(fields[0]),
                    "hi": parse_float(fields[1]),
                    "count": int(fields[2]),
                }
            )
        except ValueError:
            raise click.BadParameter(f"lattice axis '{part}' has a non-integer count")
    return axes


def parse_params(values: tuple[str, ...]) -> dict:
    """``KEY=VALUE`` pairs; values that parse as numbers become floats."""
    params: dict = {}
    for item in values:
        key, sep, value = item.partition("=")
        if not sep:
            raise click.BadParameter(f"parameter '{item}' must be KEY=VALUE")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            params[key.strip()] = value.strip()
    return params
