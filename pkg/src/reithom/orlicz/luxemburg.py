"""Orlicz modular and Luxemburg norm of sampled fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from reithom.errors import ContractError, DataError
from reithom.fields.periodic import PeriodicField
from reithom.orlicz.models import NFunctionCheck
from reithom.orlicz.nfunction import NFunction, conjugate_nfunction

DEFAULT_MODULAR_TOL = 1e-10
MAX_BISECTIONS = 400
HOLDER_PAIRS = 4
HOLDER_POINTS = 32


@dataclass(frozen=True)
class LuxemburgNormRequest:
    """A sampled field on a box of measure ``domain_measure``.

    Samples are midpoint-quadrature nodes, so integrals are
    ``domain_measure * mean(...)``.
    """

    field: PeriodicField | np.ndarray
    nfunction: NFunction
    domain_measure: float = 1.0

    @property
    def samples(self) -> np.ndarray:
        if isinstance(self.field, PeriodicField):
            return np.asarray(self.field.values, dtype=float)
        return np.asarray(self.field, dtype=float)


def modular(values: np.ndarray, nf: NFunction, measure: float = 1.0, k: float = 1.0) -> float:
    """Orlicz modular ``int B(|u|/k)`` by midpoint quadrature."""
    with np.errstate(over="ignore"):
        return float(measure * np.mean(nf(np.abs(values) / k)))


def _inverse(nf: NFunction, level: float) -> float:
    """``B^{-1}(level)`` by bracket doubling and Brent's method."""
    hi = 1.0
    with np.errstate(over="ignore"):
        while float(nf(hi)) < level:
            hi *= 2.0
    return brentq(lambda s: float(nf(s)) - level, 0.0, hi, xtol=1e-14)


def luxemburg_norm(req: LuxemburgNormRequest, tol: float = DEFAULT_MODULAR_TOL) -> float:
    """``inf{k > 0 : int B(|u|/k) <= 1}`` by bisection on ``k``.

    ``k -> int B(|u|/k)`` is strictly decreasing wherever it is positive, so
    bisection converges to the unique ``k*`` with modular one.
    """
    values = req.samples
    if not np.all(np.isfinite(values)):
        raise DataError("Luxemburg norm needs finite field values")
    if req.domain_measure <= 0:
        raise ContractError(f"domain measure must be positive, got {req.domain_measure}")
    if tol <= 0:
        raise ContractError(f"tol must be positive, got {tol}")

    nf, measure = req.nfunction, req.domain_measure
    sup = float(np.max(np.abs(values))) if values.size else 0.0
    if sup == 0.0:
        return 0.0

    lo = sup / _inverse(nf, 1.0 / measure) * 1e-3
    hi = sup * 1e3
    while modular(values, nf, measure, hi) > 1.0:
        hi *= 2.0
    while modular(values, nf, measure, lo) <= 1.0:
        lo *= 0.5

    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        value = modular(values, nf, measure, mid)
        if abs(value - 1.0) <= tol:
            return mid
        if value > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return 0.5 * (lo + hi)


def holder_check(
    nf: NFunction,
    seed: int = 0,
    n_pairs: int = HOLDER_PAIRS,
    n_points: int = HOLDER_POINTS,
    tol: float = 1e-6,
) -> NFunctionCheck:
    """Sampled Hölder inequality ``|int u v| <= 2 |u|_B |v|_B~`` on the unit cell.

    Draws ``n_pairs`` Gaussian pairs plus the Young-extremal pair
    ``v = b(|u|) sign(u)``; ``worst`` is the largest ratio of the two sides.
    """
    conj = conjugate_nfunction(nf)
    rng = np.random.default_rng(seed)
    pairs = [(rng.standard_normal(n_points), rng.standard_normal(n_points)) for _ in range(n_pairs)]
    u = rng.standard_normal(n_points)
    pairs.append((u, np.sign(u) * nf.b(np.abs(u))))

    worst = 0.0
    for u, v in pairs:
        bound = 2.0 * luxemburg_norm(LuxemburgNormRequest(u, nf)) * luxemburg_norm(
            LuxemburgNormRequest(v, conj)
        )
        worst = max(worst, abs(float(np.mean(u * v))) / bound)
    return NFunctionCheck(name="holder_inequality", passed=worst <= 1.0 + tol, worst=worst)
