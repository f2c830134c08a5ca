"""N-functions and the scalar Orlicz machinery built on them.

An N-function ``B`` is given as a closed-form pair ``(B, b)`` with
``B(t) = int_0^t b``. Every operation here is pure; ``NFunction`` values are
immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from reithom import logger
from reithom.errors import (
    ContractError,
    DomainError,
    InvalidNFunctionError,
    UnboundedConjugateError,
)
from reithom.orlicz.models import Delta2Report, NFunctionCheck, NFunctionReport

ScalarMap = Callable[[np.ndarray], np.ndarray]

# Conjugate brackets double from 1 up to 2**60 before giving up.
MAX_BRACKET_DOUBLINGS = 60
DEFAULT_CONJUGATE_TOL = 1e-12


@dataclass(frozen=True)
class NFunction:
    """An Orlicz generator ``B`` with density ``b``.

    ``density`` may be omitted, in which case a centered finite difference of
    ``eval`` with step ``1e-6 * max(t, 1)`` is used (lower-accuracy mode).
    ``conjugate_eval``/``conjugate_density`` hold the closed-form conjugate
    when one is known.
    """

    label: str
    eval: ScalarMap
    density: ScalarMap | None = None
    delta2_witness: tuple[float, float] | None = None
    conjugate_eval: ScalarMap | None = None
    conjugate_density: ScalarMap | None = None

    def __call__(self, t):
        return self.eval(np.asarray(t, dtype=float))

    def b(self, t):
        """Density ``b(t)``, falling back to finite differences of ``B``."""
        t = np.asarray(t, dtype=float)
        if self.density is not None:
            return self.density(t)
        h = 1e-6 * np.maximum(t, 1.0)
        central = (self.eval(t + h) - self.eval(np.maximum(t - h, 0.0))) / (
            t + h - np.maximum(t - h, 0.0)
        )
        return central

    @property
    def has_closed_conjugate(self) -> bool:
        return self.conjugate_eval is not None


def eval_pair(nf: NFunction, t: float) -> tuple[float, float]:
    """Return ``(B(t), b(t))`` for ``t >= 0``."""
    if not np.isfinite(t) or t < 0:
        raise DomainError(f"N-function argument must be a nonnegative real, got {t}")
    return float(nf(t)), float(nf.b(t))


def _density_root(nf: NFunction, t: float, tol: float) -> float:
    """Smallest ``s`` with ``b(s) = t`` (``b`` nondecreasing), by bracketing."""
    s_hi = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(MAX_BRACKET_DOUBLINGS + 1):
            if nf.b(s_hi) >= t:
                break
            s_hi *= 2.0
        else:
            raise UnboundedConjugateError(
                f"b(s) stays below {t} for s up to 2**{MAX_BRACKET_DOUBLINGS} "
                f"({nf.label}); the conjugate is unbounded there"
            )

        def gap(s: float) -> float:
            return float(np.nan_to_num(nf.b(s) - t, posinf=1e300, neginf=-1e300))

        if gap(s_hi) == 0.0:
            return s_hi
        return brentq(gap, 0.0, s_hi, xtol=tol, maxiter=500)


def conjugate(nf: NFunction, t: float, tol: float = DEFAULT_CONJUGATE_TOL) -> float:
    """Complementary N-function ``B~(t) = sup_s {s t - B(s)}``.

    Solves ``b(s*) = t`` by monotone root finding and returns
    ``s* t - B(s*)``. The value is second-order accurate in the root error.
    """
    if not np.isfinite(t) or t < 0:
        raise DomainError(f"conjugate argument must be a nonnegative real, got {t}")
    if tol <= 0:
        raise ContractError(f"tol must be positive, got {tol}")
    if t == 0:
        return 0.0
    s_star = _density_root(nf, float(t), tol)
    return float(s_star * t - nf(s_star))


def conjugate_nfunction(nf: NFunction, tol: float = DEFAULT_CONJUGATE_TOL) -> NFunction:
    """``B~`` as an NFunction.

    Uses the closed form when known; otherwise evaluates the conjugate
    numerically with density the generalized inverse of ``b``.
    """
    if nf.has_closed_conjugate:
        return NFunction(
            label=f"conj({nf.label})",
            eval=nf.conjugate_eval,
            density=nf.conjugate_density,
            conjugate_eval=nf.eval,
            conjugate_density=nf.density,
        )

    def conj_eval(t: np.ndarray) -> np.ndarray:
        flat = [conjugate(nf, float(v), tol) for v in np.ravel(t)]
        return np.reshape(np.asarray(flat, dtype=float), np.shape(t))

    def conj_density(t: np.ndarray) -> np.ndarray:
        flat = [0.0 if v == 0 else _density_root(nf, float(v), tol) for v in np.ravel(t)]
        return np.reshape(np.asarray(flat, dtype=float), np.shape(t))

    return NFunction(
        label=f"conj({nf.label})",
        eval=conj_eval,
        density=conj_density,
        conjugate_eval=nf.eval,
        conjugate_density=nf.density,
    )


def delta2_check(
    nf: NFunction, t_min: float, t_max: float, n_samples: int = 64
) -> Delta2Report:
    """Heuristic Delta_2 verdict from ``B(2t)/B(t)`` on a geometric grid.

    The condition quantifies over every ``t >= t0`` so no finite grid can
    certify it; the report records the inspected range.
    """
    if not (0 < t_min < t_max):
        raise ContractError(f"need 0 < t_min < t_max, got [{t_min}, {t_max}]")
    if n_samples < 16:
        raise ContractError(f"n_samples must be at least 16, got {n_samples}")

    grid = np.geomspace(t_min, t_max, n_samples)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        values = nf(grid)
        doubled = nf(2.0 * grid)
        if np.any(values == 0):
            bad = grid[values == 0][0]
            raise InvalidNFunctionError(f"B({bad:g}) = 0 for {nf.label}; B must be > 0")
        ratio = doubled / values

    report_range = (float(t_min), float(t_max))
    if not np.all(np.isfinite(ratio)):
        logger.debug(f"Delta2 {nf.label}: ratio overflowed on [{t_min}, {t_max}]")
        return Delta2Report(holds=False, t_range=report_range, n_samples=n_samples)

    top = ratio[grid >= t_max / 10.0]
    if top.size < 2:
        top = ratio[-2:]
    growing = np.all(np.diff(top) > 1e-12 * np.abs(top[1:]))
    if growing:
        return Delta2Report(holds=False, t_range=report_range, n_samples=n_samples)

    alpha = float(ratio.max())
    t0 = float(t_min)
    witness = nf.delta2_witness
    if witness is not None and alpha <= witness[0] * (1 + 1e-9):
        t0 = float(witness[1])
    return Delta2Report(
        holds=True, alpha=alpha, t0=t0, t_range=report_range, n_samples=n_samples
    )


def _increasing(ratio: np.ndarray) -> bool:
    finite = ratio[np.isfinite(ratio)]
    if finite.size < 2:
        return ratio.size > 0 and bool(np.isposinf(ratio[-1]))
    steps_ok = np.all(np.diff(finite) >= -1e-12 * np.abs(finite[1:]))
    return bool(steps_ok and finite[-1] > finite[0] * (1 + 1e-9))


def validate_nfunction(
    nf: NFunction,
    t_min: float = 1e-3,
    t_max: float = 1e3,
    n_samples: int = 64,
    tol: float = 1e-8,
) -> NFunctionReport:
    """Sample every N-function invariant and report pass/fail per check."""
    grid = np.geomspace(t_min, t_max, n_samples)
    checks: list[NFunctionCheck] = []

    with np.errstate(over="ignore", invalid="ignore"):
        b0 = float(nf(0.0))
        checks.append(NFunctionCheck(name="zero_at_origin", passed=abs(b0) <= tol, worst=b0))

        values = nf(grid)
        finite = np.isfinite(values)
        checks.append(
            NFunctionCheck(
                name="positive",
                passed=bool(np.all(values[finite] > 0)),
                worst=float(values[finite].min()) if finite.any() else 0.0,
            )
        )

        left, right = grid[:-2], grid[2:]
        mid_gap = nf(0.5 * (left + right)) - 0.5 * (nf(left) + nf(right))
        scale = np.maximum(1.0, np.abs(nf(right)))
        excess = np.where(np.isfinite(mid_gap), mid_gap / scale, 0.0)
        checks.append(
            NFunctionCheck(
                name="midpoint_convex",
                passed=bool(np.all(excess <= tol)),
                worst=float(excess.max()),
            )
        )

        small = np.geomspace(1e-8, 1e-4, 16)
        checks.append(
            NFunctionCheck(
                name="superlinear_at_zero",
                passed=_increasing(nf(small) / small),
                worst=float(nf(small[0]) / small[0]),
            )
        )
        large = np.geomspace(1e4, 1e8, 16)
        checks.append(
            NFunctionCheck(
                name="superlinear_at_infinity",
                passed=_increasing(nf(large) / large),
                worst=float(np.nan_to_num(nf(large[0]) / large[0], posinf=1e300)),
            )
        )

    checkpoints = grid[(grid <= 50.0)][:: max(1, n_samples // 8)]
    density_gap = 0.0
    young_gap = 0.0
    for t in checkpoints:
        integral, _ = quad(lambda s: float(nf.b(s)), 0.0, float(t), limit=200)
        value = float(nf(t))
        density_gap = max(density_gap, abs(integral - value) / max(1.0, abs(value)))

        bt = float(nf.b(t))
        lower = conjugate(nf, bt) - t * bt
        upper = t * bt - float(nf(2.0 * t))
        young_gap = max(young_gap, lower / max(1.0, t * bt), upper / max(1.0, t * bt))

    checks.append(
        NFunctionCheck(
            name="density_consistent", passed=density_gap <= 1e-6, worst=density_gap
        )
    )
    checks.append(NFunctionCheck(name="young_consistent", passed=young_gap <= tol, worst=young_gap))

    report = NFunctionReport(label=nf.label, checks=checks)
    logger.debug(f"N-function {nf.label}: passed={report.passed}")
    return report
