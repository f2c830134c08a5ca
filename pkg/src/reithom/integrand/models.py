"""Integrands ``f(y, z, xi)`` of order ``s`` and the scale map ``x -> (y, z)``.

``xi`` lives in ``R^s_*``: shape ``(d, N)`` for ``s = 1`` and ``(d, N, N)``
(symmetric) for ``s = 2``. All densities broadcast over leading axes:
``y``/``z`` have shape ``(..., N)`` and ``xi`` has shape ``(..., *xi_shape)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal, Protocol

import numpy as np
from pydantic import BaseModel, Field

from reithom.errors import ConfigError, ContractError
from reithom.fields.periodic import wrap
from reithom.orlicz.catalog import nfunction_from_spec, power
from reithom.orlicz.nfunction import NFunction

CoefficientMap = Callable[[np.ndarray, np.ndarray], np.ndarray]
DensityMap = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

DEFAULT_DELTA = 1e-6
_TINY = 1e-300


# ---------------------------------------------------------------------------
# Outer profiles r -> phi(r)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    """Radial profile composed with the coefficient field.

    ``quadratic``: ``r**2``; ``power``: ``r**p``; ``nfunction``: ``B(r)``.
    """

    kind: Literal["quadratic", "power", "nfunction"]
    p: float = 2.0
    nfunction: NFunction | None = None

    @property
    def label(self) -> str:
        if self.kind == "quadratic":
            return "quadratic"
        if self.kind == "power":
            return f"power:{self.p:g}"
        return f"nfunction:{self.nfunction.label}"

    @property
    def kinked(self) -> bool:
        """True when ``phi'(r)/r`` blows up at the origin."""
        if self.kind == "power":
            return self.p < 2.0
        if self.kind == "nfunction":
            tiny = np.array([1e-8, 1e-6])
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                ratio = self.nfunction.b(tiny) / tiny
            return bool(not np.all(np.isfinite(ratio)) or ratio[0] > ratio[1] * (1 + 1e-6))
        return False

    def value(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "quadratic":
            return r**2
        if self.kind == "power":
            return r**self.p
        return self.nfunction(r)

    def slope(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "quadratic":
            return 2.0 * r
        if self.kind == "power":
            return self.p * r ** (self.p - 1.0)
        return self.nfunction.b(r)

    def growth_nfunction(self) -> NFunction:
        """The N-function the profile naturally grows like."""
        if self.kind == "quadratic":
            return nfunction_from_spec("plog:2,0")
        if self.kind == "power":
            return power(self.p)
        return self.nfunction

    @classmethod
    def from_spec(cls, spec: str) -> "Profile":
        """Parse ``quadratic``, ``power:p`` or ``nfunction:<catalog spec>``."""
        name, _, rest = spec.strip().partition(":")
        if name == "quadratic" and not rest:
            return cls("quadratic")
        if name == "power":
            try:
                p = float(rest)
            except ValueError:
                raise ConfigError(f"profile '{spec}' needs a numeric exponent")
            if p < 1:
                raise ConfigError(f"profile '{spec}' needs p >= 1 for convexity")
            return cls("power", p=p)
        if name == "nfunction" and rest:
            return cls("nfunction", nfunction=nfunction_from_spec(rest))
        raise ConfigError(
            f"Unknown profile '{spec}'. Choose one of: quadratic, power:p, nfunction:<name>"
        )


# ---------------------------------------------------------------------------
# Integrand
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Growth:
    """Constants of ``c1 B(|xi|) <= f <= c2 (1 + B(|xi|))``."""

    c1: float
    c2: float
    nfunction: NFunction

    def __post_init__(self) -> None:
        if self.c1 <= 0 or self.c2 <= 0:
            raise ConfigError(f"growth constants must be positive, got ({self.c1}, {self.c2})")


class TabulatedDensity(Protocol):
    """What :meth:`Integrand.from_table` needs from a homogenized table."""

    label: str

    def energy(self, xi: np.ndarray) -> np.ndarray: ...

    def flux_at(self, xi: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class Integrand:
    """A multiscale convex integrand.

    ``density`` and ``flux`` receive unwrapped ``(y, z)`` and a symmetrized
    ``xi``; :func:`reithom.integrand.eval_f` applies the periodic wrap.
    ``coefficient`` and ``profile`` are set for the separable form
    ``a(y, z) * phi(|xi|)`` and are what the 1-D oracles read.
    """

    label: str
    order: int
    dims: tuple[int, int]
    density: DensityMap
    flux: DensityMap
    growth: Growth
    regularization_delta: float = 0.0
    nonsmooth: bool = False
    coefficient: CoefficientMap | None = None
    profile: Profile | None = None
    depends_on_y: bool = True
    depends_on_z: bool = True
    params: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        if self.order not in (1, 2):
            raise ConfigError(f"integrand order must be 1 or 2, got {self.order}")
        if self.regularization_delta < 0:
            raise ConfigError("regularization delta must be nonnegative")

    @property
    def dim(self) -> int:
        return self.dims[0]

    @property
    def components(self) -> int:
        return self.dims[1]

    @property
    def xi_shape(self) -> tuple[int, ...]:
        n, d = self.dims
        return (d, n) if self.order == 1 else (d, n, n)

    @property
    def smooth(self) -> bool:
        return not self.nonsmooth or self.regularization_delta > 0

    def prepare(self, xi: np.ndarray) -> np.ndarray:
        """Check the trailing shape and symmetrize second-order tensors."""
        xi = np.asarray(xi, dtype=float)
        k = len(self.xi_shape)
        if xi.shape[xi.ndim - k :] != self.xi_shape or xi.ndim < k:
            raise ContractError(
                f"xi of shape {xi.shape} does not end in {self.xi_shape} "
                f"(order {self.order}, N={self.dim}, d={self.components})"
            )
        if self.order == 2:
            xi = 0.5 * (xi + np.swapaxes(xi, -1, -2))
        return xi

    # -----------------------------------------------------------------------
    # Constructors
    # -----------------------------------------------------------------------

    @classmethod
    def separable(
        cls,
        label: str,
        coefficient: CoefficientMap,
        profile: Profile,
        growth: Growth,
        order: int = 1,
        dims: tuple[int, int] = (1, 1),
        regularization_delta: float = 0.0,
        depends_on_y: bool = True,
        depends_on_z: bool = True,
        params: dict | None = None,
    ) -> "Integrand":
        """``f(y, z, xi) = a(y, z) * phi(|xi|)`` with optional smoothing.

        With ``delta > 0`` the radius is ``sqrt(|xi|^2 + delta^2)`` and the
        constant ``phi(delta)`` is subtracted so ``f(y, z, 0) = 0``.
        """
        n_xi = 2 if order == 1 else 3
        delta = float(regularization_delta)
        phi0 = float(profile.value(np.asarray(delta))) if delta > 0 else 0.0

        def radius(xi: np.ndarray) -> np.ndarray:
            r2 = np.sum(xi**2, axis=tuple(range(-n_xi, 0)))
            return np.sqrt(r2 + delta**2)

        def density(y: np.ndarray, z: np.ndarray, xi: np.ndarray) -> np.ndarray:
            return coefficient(y, z) * (profile.value(radius(xi)) - phi0)

        def flux(y: np.ndarray, z: np.ndarray, xi: np.ndarray) -> np.ndarray:
            r = radius(xi)
            safe = np.where(r > 0, r, _TINY)
            ratio = coefficient(y, z) * profile.slope(safe) / safe
            return ratio[(...,) + (None,) * n_xi] * xi

        return cls(
            label=label,
            order=order,
            dims=dims,
            density=density,
            flux=flux,
            growth=growth,
            regularization_delta=delta,
            nonsmooth=profile.kinked,
            coefficient=coefficient,
            profile=profile,
            depends_on_y=depends_on_y,
            depends_on_z=depends_on_z,
            params=params or {},
        )

    @classmethod
    def from_table(
        cls, table: TabulatedDensity, growth: Growth, order: int = 1, dims=(1, 1)
    ) -> "Integrand":
        """An ``(y, z)``-independent integrand backed by a homogenized table."""

        def density(y, z, xi):
            return table.energy(xi)

        def flux(y, z, xi):
            return table.flux_at(xi)

        return cls(
            label=f"table({table.label})",
            order=order,
            dims=dims,
            density=density,
            flux=flux,
            growth=growth,
            depends_on_y=False,
            depends_on_z=False,
        )


# ---------------------------------------------------------------------------
# Scale map
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaleMap:
    """``x -> (x/eps mod Y, x/eps^2 mod Z)`` with cells ``[-1/2, 1/2)^N``."""

    epsilon: float

    def __post_init__(self) -> None:
        if not (0 < self.epsilon <= 1):
            raise ContractError(f"epsilon must lie in (0, 1], got {self.epsilon}")

    def sample(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        return wrap(x / self.epsilon), wrap(x / self.epsilon**2)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class HypothesisCheck(BaseModel):
    """One sampled structural hypothesis on an integrand."""

    name: str = Field(description="Checked property.")
    passed: bool
    worst: float = Field(description="Worst sampled value of the checked quantity.")
    detail: str = ""


class ValidationReport(BaseModel):
    """Sampled verdicts on periodicity, growth, convexity and differentiability."""

    label: str
    sample_budget: int
    seed: int
    checks: list[HypothesisCheck] = Field(default_factory=list)
    worst_lower_ratio: float = Field(description="min f / (c1 B(|xi|)) over samples.")
    worst_upper_ratio: float = Field(description="max f / (c2 (1 + B(|xi|))) over samples.")
    worst_convexity_violation: float
    max_gradient_discrepancy: float | None = Field(
        None, description="None when the integrand is nonsmooth and unregularized."
    )
    gradient_growth_constant: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> HypothesisCheck:
        return next(c for c in self.checks if c.name == name)
