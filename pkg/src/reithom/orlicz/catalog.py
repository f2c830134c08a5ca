"""Built-in N-functions selectable by name.

``power:p``   B(t) = t^p / p           (conjugate t^p' / p', 1/p + 1/p' = 1)
``plog:p,q``  B(t) = t^p log(1+t)^q    (``plog:2,0`` is t^2, ``plog:3,0`` is t^3)
``exp``       B(t) = e^t - t - 1       (violates Delta_2)
"""

from __future__ import annotations

import numpy as np

from reithom.errors import ConfigError
from reithom.orlicz.nfunction import NFunction

CATALOG_NAMES = ("power", "plog", "exp")


def power(p: float) -> NFunction:
    if p <= 1:
        raise ConfigError(f"power:p needs p > 1, got {p}")
    q = p / (p - 1.0)
    return NFunction(
        label=f"power:{p:g}",
        eval=lambda t: np.abs(t) ** p / p,
        density=lambda t: np.abs(t) ** (p - 1.0),
        delta2_witness=(2.0**p, 0.0),
        conjugate_eval=lambda t: np.abs(t) ** q / q,
        conjugate_density=lambda t: np.abs(t) ** (q - 1.0),
    )


def plog(p: float, q: float) -> NFunction:
    if p < 1 or q < 0 or (p == 1 and q == 0):
        raise ConfigError(f"plog:p,q needs p >= 1, q >= 0 and not (1, 0), got ({p}, {q})")

    def B(t):
        t = np.abs(t)
        return t**p * np.log1p(t) ** q

    def b(t):
        t = np.abs(t)
        head = p * t ** (p - 1.0) * np.log1p(t) ** q
        if q == 0:
            return head
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = q * t**p * np.log1p(t) ** (q - 1.0) / (1.0 + t)
        return head + np.nan_to_num(tail)

    return NFunction(
        label=f"plog:{p:g},{q:g}",
        eval=B,
        density=b,
        delta2_witness=(2.0 ** (p + q), 0.0),
    )


def exponential() -> NFunction:
    return NFunction(
        label="exp",
        eval=lambda t: np.expm1(np.abs(t)) - np.abs(t),
        density=lambda t: np.expm1(np.abs(t)),
    )


def _numbers(raw: str, count: int, spec: str) -> list[float]:
    parts = [p for p in raw.split(",") if p.strip()]
    if len(parts) != count:
        raise ConfigError(f"N-function spec '{spec}' expects {count} parameter(s)")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"N-function spec '{spec}' has a non-numeric parameter")


def nfunction_from_spec(spec: str) -> NFunction:
    """Parse ``power:p``, ``plog:p,q`` or ``exp``."""
    name, _, raw = spec.strip().partition(":")
    if name == "power":
        (p,) = _numbers(raw, 1, spec)
        return power(p)
    if name == "plog":
        p, q = _numbers(raw, 2, spec)
        return plog(p, q)
    if name == "exp":
        if raw:
            raise ConfigError("N-function 'exp' takes no parameters")
        return exponential()
    raise ConfigError(
        f"Unknown N-function '{spec}'. Choose one of: power:p, plog:p,q, exp"
    )
