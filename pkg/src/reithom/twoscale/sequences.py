"""Named generators and test functions for the two-scale commands.

Every entry maps ``(x, y, z)`` (each shaped ``(..., N)``) to values shaped
``(...)`` and only reads the first coordinate.
"""

from __future__ import annotations

import numpy as np

from reithom.errors import ConfigError
from reithom.fields.grid import BoundaryData, MacroGrid
from reithom.twoscale.models import CorrectorTriple, Generator, OscillatingSequence

TWO_PI = 2.0 * np.pi

DEFAULT_POINTS_PER_PERIOD = 16


def _first(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float)[..., 0]


SEQUENCES: dict[str, Generator] = {
    "constant": lambda x, y, z: np.ones_like(_first(x)),
    "cos_fast": lambda x, y, z: np.cos(TWO_PI * _first(z)),
    "sin_slow": lambda x, y, z: np.sin(TWO_PI * _first(y)),
    "two_plus_cos_slow": lambda x, y, z: 2.0 + np.cos(TWO_PI * _first(y)),
    "x_sin_slow": lambda x, y, z: _first(x) * np.sin(TWO_PI * _first(y)),
    "x_cos_slow": lambda x, y, z: _first(x) * np.cos(TWO_PI * _first(y)),
    "cos_both": lambda x, y, z: np.cos(TWO_PI * _first(y)) * np.cos(TWO_PI * _first(z)),
}

TESTS: dict[str, Generator] = {
    "one": lambda x, y, z: np.ones_like(_first(x)),
    "cos_z": lambda x, y, z: np.cos(TWO_PI * _first(z)),
    "sin_y": lambda x, y, z: np.sin(TWO_PI * _first(y)),
    "cos_y": lambda x, y, z: np.cos(TWO_PI * _first(y)),
    "cos_yz": lambda x, y, z: np.cos(TWO_PI * _first(y)) * np.cos(TWO_PI * _first(z)),
}


def _lookup(registry: dict[str, Generator], name: str, what: str) -> Generator:
    try:
        return registry[name]
    except KeyError:
        known = ", ".join(sorted(registry))
        raise ConfigError(f"unknown {what} '{name}' (known: {known})")


def named_test(name: str) -> Generator:
    return _lookup(TESTS, name, "test function")


def make_sequence(
    name: str,
    epsilons,
    length: float = 1.0,
    dim: int = 1,
    points_per_period: int = DEFAULT_POINTS_PER_PERIOD,
) -> OscillatingSequence:
    """A catalog sequence whose grid resolves every ``eps^2`` with ``points_per_period``."""
    generator = _lookup(SEQUENCES, name, "sequence")
    return OscillatingSequence(
        label=name,
        generator=generator,
        epsilons=tuple(epsilons),
        grid=MacroGrid(length, 2, dim, BoundaryData.affine(0.0, dim)),
        points_per_period=points_per_period,
    )


def _zero(x: np.ndarray) -> np.ndarray:
    return np.zeros(np.shape(x)[:-1])


# Hessian limits: macro -> 1, slow -> -sin(2 pi y), fast -> cos(2 pi z)
TRIPLES: dict[str, CorrectorTriple] = {
    "macro": CorrectorTriple(
        u=lambda x: 0.5 * _first(x) ** 2,
        U=lambda x, y: _zero(y),
        W=lambda x, y, z: _zero(z),
    ),
    "slow": CorrectorTriple(
        u=_zero,
        U=lambda x, y: np.sin(TWO_PI * _first(y)) / TWO_PI**2,
        W=lambda x, y, z: _zero(z),
    ),
    "fast": CorrectorTriple(
        u=_zero,
        U=lambda x, y: _zero(y),
        W=lambda x, y, z: -np.cos(TWO_PI * _first(z)) / TWO_PI**2,
    ),
}


def named_triple(name: str) -> CorrectorTriple:
    try:
        return TRIPLES[name]
    except KeyError:
        raise ConfigError(f"unknown corrector triple '{name}' (known: {', '.join(TRIPLES)})")
