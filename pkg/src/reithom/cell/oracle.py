"""Closed-form and quadrature values of one-dimensional homogenized densities.

In 1-D the inner problem only constrains the mean of ``eta = xi + psi'``
(or ``xi + psi''``), so the optimal ``eta`` carries a constant flux ``sigma``:

    a(z) phi'(|eta(z)|) sign(eta) = sigma,    avg_Z eta = xi.

For ``phi = r^p`` this gives the p-harmonic mean; other profiles are solved for
``sigma`` by root finding.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import brentq

from reithom.errors import ContractError
from reithom.fields.grid import MacroGrid
from reithom.fields.periodic import cell_points
from reithom.integrand.models import Integrand, Profile, ScaleMap
from reithom.orlicz.nfunction import conjugate_nfunction

ORACLE_POINTS = 1 << 20
GENERAL_ORACLE_POINTS = 1 << 10


def harmonic_mean(a: Callable[[np.ndarray], np.ndarray], n: int = ORACLE_POINTS) -> float:
    """``(avg 1/a)^-1`` by the midpoint rule on ``n`` points of the unit cell."""
    z = cell_points(n)[:, None]
    return float(1.0 / np.mean(1.0 / a(z)))


def p_harmonic_mean(
    a: Callable[[np.ndarray], np.ndarray], p: float, n: int = ORACLE_POINTS
) -> float:
    """``(avg a^{-1/(p-1)})^{-(p-1)}``; ``p = 2`` is the harmonic mean."""
    if p <= 1:
        raise ContractError(f"p-harmonic mean needs p > 1, got {p}")
    z = cell_points(n)[:, None]
    return float(np.mean(a(z) ** (-1.0 / (p - 1.0))) ** (-(p - 1.0)))


def _exponent(profile: Profile) -> float | None:
    if profile.kind == "quadratic":
        return 2.0
    if profile.kind == "power":
        return profile.p
    return None


def _inverse_slope(profile: Profile, t: np.ndarray) -> np.ndarray:
    p = _exponent(profile)
    if p is not None:
        return (t / p) ** (1.0 / (p - 1.0))
    return conjugate_nfunction(profile.nfunction).b(t)


def constant_flux_value(profile: Profile, weights: np.ndarray, xi: float) -> float:
    """``min avg a phi(|eta|)`` over ``avg eta = xi`` for coefficient samples ``weights``."""
    target = abs(float(xi))
    if target == 0.0:
        return 0.0
    a = np.asarray(weights, dtype=float)

    def mean_eta(sigma: float) -> float:
        return float(np.mean(_inverse_slope(profile, sigma / a))) - target

    hi = float(profile.slope(np.asarray(target))) * float(np.max(a))
    while mean_eta(hi) < 0:
        hi *= 2.0
    sigma = brentq(mean_eta, 0.0, hi, xtol=1e-14 * hi, rtol=1e-14, maxiter=500)
    eta = _inverse_slope(profile, sigma / a)
    return float(np.mean(a * profile.value(eta)))


def _separable_1d(ig: Integrand) -> Profile:
    if ig.dim != 1 or ig.components != 1:
        raise ContractError("closed-form homogenized values exist only for N = d = 1")
    if ig.coefficient is None or ig.profile is None:
        raise ContractError(f"{ig.label} is not of the form a(y, z) phi(|xi|)")
    return ig.profile


def inner_oracle(ig: Integrand, y: float, xi: float, n: int | None = None) -> float:
    """``f_hom(y, xi)`` of a separable 1-D integrand (either order)."""
    profile = _separable_1d(ig)
    y_arr = np.array([[float(y)]])

    def a(z: np.ndarray) -> np.ndarray:
        return np.broadcast_to(ig.coefficient(y_arr, z), z.shape[:-1])

    p = _exponent(profile)
    if p is not None:
        return p_harmonic_mean(a, p, n or ORACLE_POINTS) * abs(float(xi)) ** p
    z = cell_points(n or GENERAL_ORACLE_POINTS)[:, None]
    return constant_flux_value(profile, a(z), xi)


def reiterated_oracle(ig: Integrand, xi: float, n: int = 1 << 10) -> float | None:
    """``f_hom_bar(xi)`` of a separable 1-D power-type integrand; ``None`` otherwise.

    With ``phi = r^p`` both levels reduce to p-harmonic means of the
    coefficient, first over ``z`` then over ``y``.
    """
    profile = _separable_1d(ig)
    p = _exponent(profile)
    if p is None:
        return None
    pts = cell_points(n)
    y = pts[:, None, None]
    z = pts[None, :, None]
    a = np.broadcast_to(ig.coefficient(y, z), (n, n))
    inner = np.mean(a ** (-1.0 / (p - 1.0)), axis=1) ** (-(p - 1.0))
    outer = np.mean(inner ** (-1.0 / (p - 1.0))) ** (-(p - 1.0))
    return float(outer * abs(float(xi)) ** p)


# ---------------------------------------------------------------------------
# Exact minima of the discrete 1-D Dirichlet problems
# ---------------------------------------------------------------------------


def _node_coefficient(ig: Integrand, points: np.ndarray, epsilon: float) -> np.ndarray:
    y, z = ScaleMap(epsilon).sample(points)
    return np.broadcast_to(ig.coefficient(y, z), points.shape[:-1])


def dirichlet_oracle_s1(ig: Integrand, grid: MacroGrid, epsilon: float) -> float | None:
    """``min F_eps`` over grid functions with affine data, coefficients at midpoints.

    Only the mean of ``u'`` is constrained, so the minimum is the discrete
    p-harmonic mean ``|xi0 L|^p (sum h a_i^{-1/(p-1)})^{-(p-1)}``.
    """
    profile = _separable_1d(ig)
    p = _exponent(profile)
    if p is None or ig.regularization_delta > 0:
        return None
    a = _node_coefficient(ig, grid.midpoints(), epsilon)
    jump = abs(float(grid.boundary.xi0.ravel()[0]) * grid.length)
    return float(jump**p * np.sum(grid.h * a ** (-1.0 / (p - 1.0))) ** (-(p - 1.0)))


def clamped_oracle_s2(ig: Integrand, grid: MacroGrid, epsilon: float) -> float | None:
    """``min F_eps`` for quadratic profiles with the two end nodes on each side pinned.

    Second differences ``w_k`` at interior nodes are free subject to two linear
    constraints (``sum h w_k = c1`` and ``sum h (L - x_k) w_k = c2``), so the
    minimum is ``c^T M^{-1} c`` with ``M`` the ``1/a``-weighted moment matrix.
    """
    profile = _separable_1d(ig)
    if _exponent(profile) != 2.0 or ig.regularization_delta > 0:
        return None
    nodes = grid.nodes()
    u = np.asarray(grid.boundary(nodes))[..., 0]
    h, n = grid.h, grid.n_cells
    x = nodes[1:-1, 0]
    a = _node_coefficient(ig, nodes[1:-1], epsilon)
    t = grid.length - x
    moments = np.array(
        [
            [np.sum(h / a), np.sum(h * t / a)],
            [np.sum(h * t / a), np.sum(h * t**2 / a)],
        ]
    )
    d0, dn = u[1] - u[0], u[-1] - u[-2]
    c = np.array([(dn - d0) / h, u[-1] - u[0] - n * d0])
    return float(c @ np.linalg.solve(moments, c))
