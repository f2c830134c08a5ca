"""Built-in integrands with known homogenized limits.

``quadratic_laminate``  a1(y) a2(z) |xi|^2, a1 = 1/(2 + sin 2 pi y1),
                        a2 = 1/(2 + cos 2 pi z1); f_hom_bar(xi) = |xi|^2 / 4 in 1-D.
``p_laminate``          a2(z) |xi|^p; 1-D inner value (int a2^{-1/(p-1)})^{-(p-1)} |xi|^p.
``orlicz_plog``         a1(y) a2(z) B(|xi|) with B = plog:p,q.
``constant_B``          B(|xi|); f_hom = f_hom_bar = f.
``custom``              an expression coefficient composed with a named profile.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Any

import numpy as np

from reithom import logger
from reithom.errors import ConfigError
from reithom.integrand.expression import compile_coefficient
from reithom.integrand.models import DEFAULT_DELTA, Growth, Integrand, Profile
from reithom.integrand.validate import validate
from reithom.orlicz.catalog import nfunction_from_spec, power

CATALOG = ("quadratic_laminate", "p_laminate", "orlicz_plog", "constant_B")

VALIDATION_SEED = 0
VALIDATION_BUDGET = 1000


def a1(y: np.ndarray) -> np.ndarray:
    return 1.0 / (2.0 + np.sin(2.0 * np.pi * y[..., 0]))


def a2(z: np.ndarray) -> np.ndarray:
    return 1.0 / (2.0 + np.cos(2.0 * np.pi * z[..., 0]))


def _common(params: dict[str, Any]) -> tuple[int, int, int]:
    order = int(params.get("order", 1))
    dim = int(params.get("dim", 1))
    components = int(params.get("components", 1))
    if dim not in (1, 2, 3):
        raise ConfigError(f"dim must be 1, 2 or 3, got {dim}")
    return order, dim, components


def _quadratic_laminate(params: dict[str, Any]) -> Integrand:
    order, dim, d = _common(params)
    return Integrand.separable(
        label="quadratic_laminate",
        coefficient=lambda y, z: a1(y) * a2(z),
        profile=Profile("quadratic"),
        growth=Growth(c1=1.0 / 9.0, c2=2.0, nfunction=power(2.0)),
        order=order,
        dims=(dim, d),
        params={"order": order, "dim": dim, "components": d},
    )


def _p_laminate(params: dict[str, Any]) -> Integrand:
    order, dim, d = _common(params)
    p = float(params.get("p", 3.0))
    if p <= 1:
        raise ConfigError(f"p_laminate needs p > 1, got {p}")
    delta = float(params.get("delta", DEFAULT_DELTA if p < 2 else 0.0))
    return Integrand.separable(
        label=f"p_laminate(p={p:g})",
        coefficient=lambda y, z: a2(z),
        profile=Profile("power", p=p),
        growth=Growth(c1=p / 3.0, c2=p, nfunction=power(p)),
        order=order,
        dims=(dim, d),
        regularization_delta=delta,
        depends_on_y=False,
        params={"order": order, "dim": dim, "components": d, "p": p, "delta": delta},
    )


def _orlicz_plog(params: dict[str, Any]) -> Integrand:
    order, dim, d = _common(params)
    p = float(params.get("p", 2.0))
    q = float(params.get("q", 1.0))
    nf = nfunction_from_spec(f"plog:{p:g},{q:g}")
    profile = Profile("nfunction", nfunction=nf)
    delta = float(params.get("delta", DEFAULT_DELTA if profile.kinked else 0.0))
    return Integrand.separable(
        label=f"orlicz_plog({nf.label})",
        coefficient=lambda y, z: a1(y) * a2(z),
        profile=profile,
        growth=Growth(c1=1.0 / 9.0, c2=1.0, nfunction=nf),
        order=order,
        dims=(dim, d),
        regularization_delta=delta,
        params={"order": order, "dim": dim, "components": d, "p": p, "q": q, "delta": delta},
    )


def _constant_B(params: dict[str, Any]) -> Integrand:
    order, dim, d = _common(params)
    spec = str(params.get("nf", "plog:2,0"))
    nf = nfunction_from_spec(spec)
    profile = Profile("nfunction", nfunction=nf)
    delta = float(params.get("delta", DEFAULT_DELTA if profile.kinked else 0.0))
    return Integrand.separable(
        label=f"constant_B({nf.label})",
        coefficient=lambda y, z: np.ones(np.shape(y)[:-1]),
        profile=profile,
        growth=Growth(c1=1.0, c2=1.0, nfunction=nf),
        order=order,
        dims=(dim, d),
        regularization_delta=delta,
        depends_on_y=False,
        depends_on_z=False,
        params={"order": order, "dim": dim, "components": d, "nf": spec, "delta": delta},
    )


def custom_integrand(params: dict[str, Any]) -> Integrand:
    """Integrand from ``coefficient`` (expression) and ``profile`` strings.

    Growth defaults to ``c1 = c2 = 1`` against the profile's own N-function;
    ``nfunction``, ``c1`` and ``c2`` override.
    """
    order, dim, d = _common(params)
    if "coefficient" not in params:
        raise ConfigError("custom integrands need a 'coefficient' expression")
    coefficient = compile_coefficient(str(params["coefficient"]), dim)
    profile = Profile.from_spec(str(params.get("profile", "quadratic")))
    nf = (
        nfunction_from_spec(str(params["nfunction"]))
        if "nfunction" in params
        else profile.growth_nfunction()
    )
    delta = float(params.get("delta", DEFAULT_DELTA if profile.kinked else 0.0))
    return Integrand.separable(
        label=f"custom({coefficient.source}; {profile.label})",
        coefficient=coefficient,
        profile=profile,
        growth=Growth(
            c1=float(params.get("c1", 1.0)), c2=float(params.get("c2", 1.0)), nfunction=nf
        ),
        order=order,
        dims=(dim, d),
        regularization_delta=delta,
        depends_on_y=coefficient.depends_on_y,
        depends_on_z=coefficient.depends_on_z,
        params=dict(params),
    )


_BUILDERS = {
    "quadratic_laminate": _quadratic_laminate,
    "p_laminate": _p_laminate,
    "orlicz_plog": _orlicz_plog,
    "constant_B": _constant_B,
    "custom": custom_integrand,
}


def catalog(
    name: str,
    params: dict[str, Any] | None = None,
    check: bool = True,
    seed: int = VALIDATION_SEED,
) -> Integrand:
    """Build a named integrand; seeded sampled hypothesis checks run unless ``check=False``."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise ConfigError(
            f"Unknown integrand '{name}'. Choose one of: {', '.join(_BUILDERS)}"
        )
    ig = replace(builder(dict(params or {})), name=name)
    if check:
        report = validate(ig, VALIDATION_BUDGET, seed)
        if not report.passed:
            failed = ", ".join(c.name for c in report.checks if not c.passed)
            logger.warning(f"Integrand {ig.label} failed sampled checks: {failed}")
    return ig
