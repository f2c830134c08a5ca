"""Sampled checks of the structural hypotheses on an integrand.

No finite procedure certifies convexity or growth bounds for a black-box
``f``; every verdict here is Monte Carlo plus a small lattice, and the report
records the sample budget and seed.
"""

from __future__ import annotations

import numpy as np

from reithom import logger
from reithom.errors import ContractError
from reithom.integrand.models import HypothesisCheck, Integrand, ValidationReport

MIN_BUDGET = 1000
XI_RADIUS_RANGE = (-2.0, 1.0)  # log10 of sampled |xi|
GRADIENT_RTOL = 1e-5
GROWTH_TOL = 1e-6


def _sample_xi(ig: Integrand, rng: np.random.Generator, count: int) -> np.ndarray:
    direction = rng.standard_normal((count,) + ig.xi_shape)
    if ig.order == 2:
        direction = 0.5 * (direction + np.swapaxes(direction, -1, -2))
    norms = np.sqrt(np.sum(direction**2, axis=tuple(range(1, direction.ndim))))
    radius = 10.0 ** rng.uniform(*XI_RADIUS_RANGE, size=count)
    scale = (radius / np.maximum(norms, 1e-300))[(...,) + (None,) * len(ig.xi_shape)]
    return direction * scale


def _lattice(ig: Integrand) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Midpoint (y, z) pairs on an 8-point axis with xi along the first slot."""
    axis = -0.5 + (np.arange(8) + 0.5) / 8
    yy, zz, tt = np.meshgrid(axis, axis, np.array([-2.0, -1.0, 0.5, 1.0, 2.0]), indexing="ij")
    n = yy.size
    y = np.zeros((n, ig.dim))
    z = np.zeros((n, ig.dim))
    y[:, 0], z[:, 0] = yy.ravel(), zz.ravel()
    xi = np.zeros((n,) + ig.xi_shape)
    xi.reshape(n, -1)[:, 0] = tt.ravel()
    return y, z, ig.prepare(xi)


def _norm(ig: Integrand, xi: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(xi**2, axis=tuple(range(-len(ig.xi_shape), 0))))


def _dot(ig: Integrand, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=tuple(range(-len(ig.xi_shape), 0)))


def validate(ig: Integrand, sample_budget: int = MIN_BUDGET, seed: int = 0) -> ValidationReport:
    """Check periodicity, growth, convexity and gradient consistency on samples.

    Failures are report entries, never exceptions.
    """
    if sample_budget < MIN_BUDGET:
        raise ContractError(f"sample_budget must be at least {MIN_BUDGET}, got {sample_budget}")

    rng = np.random.default_rng(seed)
    n, dim = sample_budget, ig.dim
    y = rng.uniform(-0.5, 0.5, (n, dim))
    z = rng.uniform(-0.5, 0.5, (n, dim))
    xi = ig.prepare(_sample_xi(ig, rng, n))
    ly, lz, lxi = _lattice(ig)
    y, z, xi = np.concatenate([y, ly]), np.concatenate([z, lz]), np.concatenate([xi, lxi])

    checks: list[HypothesisCheck] = []
    B = ig.growth.nfunction

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        f = np.asarray(ig.density(y, z, xi), dtype=float)
        scale = 1.0 + np.abs(f)

        # Separate periodicity in y and z, on unwrapped shifts.
        shift_gap = 0.0
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = 1.0
            shift_gap = max(
                shift_gap,
                float(np.max(np.abs(ig.density(y + e, z, xi) - f) / scale)),
                float(np.max(np.abs(ig.density(y, z + e, xi) - f) / scale)),
            )
        checks.append(
            HypothesisCheck(name="periodic", passed=shift_gap <= 1e-9, worst=shift_gap)
        )

        # Growth sandwich.
        b_xi = B(_norm(ig, xi))
        lower_gap = f - ig.growth.c1 * b_xi
        upper_gap = ig.growth.c2 * (1.0 + b_xi) - f
        lower_ratio = np.where(b_xi > 0, f / (ig.growth.c1 * b_xi), np.inf)
        upper_ratio = f / (ig.growth.c2 * (1.0 + b_xi))
        tol = GROWTH_TOL * (1.0 + b_xi)
        checks.append(
            HypothesisCheck(
                name="growth_lower",
                passed=bool(np.all(lower_gap >= -tol)),
                worst=float(np.min(lower_gap)),
            )
        )
        checks.append(
            HypothesisCheck(
                name="growth_upper",
                passed=bool(np.all(upper_gap >= -tol)),
                worst=float(np.min(upper_gap)),
            )
        )

        # Midpoint convexity in xi on random segments.
        other = ig.prepare(_sample_xi(ig, rng, xi.shape[0]))
        f_other = ig.density(y, z, other)
        f_mid = ig.density(y, z, 0.5 * (xi + other))
        violation = (f_mid - 0.5 * (f + f_other)) / (1.0 + 0.5 * np.abs(f + f_other))
        worst_convexity = float(np.max(violation))
        checks.append(
            HypothesisCheck(
                name="convex", passed=worst_convexity <= 1e-9, worst=worst_convexity
            )
        )

    max_discrepancy: float | None = None
    growth_constant: float | None = None
    if ig.smooth:
        g = np.asarray(ig.flux(y, z, xi), dtype=float)
        g_norm = _norm(ig, g)

        flat = xi.reshape(xi.shape[0], -1)
        fd = np.zeros_like(flat)
        h = 1e-6 * np.maximum(1.0, _norm(ig, xi))
        for k in range(flat.shape[1]):
            step = np.zeros_like(flat)
            step[:, k] = h
            plus = ig.density(y, z, ig.prepare((flat + step).reshape(xi.shape)))
            minus = ig.density(y, z, ig.prepare((flat - step).reshape(xi.shape)))
            fd[:, k] = (plus - minus) / (2.0 * h)
        g_flat = g.reshape(g.shape[0], -1)
        rel = np.abs(fd - g_flat) / np.maximum(1.0, np.abs(g_flat))
        max_discrepancy = float(np.max(rel))
        checks.append(
            HypothesisCheck(
                name="gradient_consistent",
                passed=max_discrepancy <= GRADIENT_RTOL,
                worst=max_discrepancy,
            )
        )

        # Subgradient inequality f(xi') >= f(xi) + g . (xi' - xi).
        with np.errstate(over="ignore", invalid="ignore"):
            gap = f_other - f - _dot(ig, g, other - xi)
        sub_worst = float(np.min(gap / (1.0 + np.abs(f_other) + np.abs(f))))
        checks.append(
            HypothesisCheck(name="subgradient", passed=sub_worst >= -1e-9, worst=sub_worst)
        )

        bound = 1.0 + B.b(1.0 + _norm(ig, xi))
        growth_constant = float(np.max(g_norm / bound))
        checks.append(
            HypothesisCheck(
                name="gradient_growth",
                passed=bool(np.isfinite(growth_constant)),
                worst=growth_constant,
                detail="sup |df/dxi| / (1 + b(1 + |xi|))",
            )
        )
    else:
        checks.append(
            HypothesisCheck(
                name="gradient_consistent",
                passed=True,
                worst=0.0,
                detail="skipped: kink at xi=0 without regularization",
            )
        )

    report = ValidationReport(
        label=ig.label,
        sample_budget=sample_budget,
        seed=seed,
        checks=checks,
        worst_lower_ratio=float(np.min(lower_ratio)),
        worst_upper_ratio=float(np.max(upper_ratio)),
        worst_convexity_violation=worst_convexity,
        max_gradient_discrepancy=max_discrepancy,
        gradient_growth_constant=growth_constant,
    )
    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.info(f"Integrand {ig.label} failed sampled checks: {', '.join(failed)}")
    return report
