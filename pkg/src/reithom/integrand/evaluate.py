"""Pointwise evaluation of integrands and their xi-gradients."""

from __future__ import annotations

import numpy as np

from reithom.errors import ContractError, NonsmoothIntegrandError
from reithom.fields.periodic import wrap
from reithom.integrand.models import Integrand


def _point(ig: Integrand, p, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if arr.shape != (ig.dim,):
        raise ContractError(f"{name} must be a point in R^{ig.dim}, got shape {arr.shape}")
    return wrap(arr)


def _tensor(ig: Integrand, xi) -> np.ndarray:
    arr = np.asarray(xi, dtype=float)
    if arr.ndim == 0 and int(np.prod(ig.xi_shape)) == 1:
        arr = arr.reshape(ig.xi_shape)
    if arr.shape != ig.xi_shape:
        raise ContractError(
            f"xi must have shape {ig.xi_shape} for order {ig.order}, got {arr.shape}"
        )
    return ig.prepare(arr)


def eval_f(ig: Integrand, y, z, xi) -> float:
    """``f(y, z, xi)`` with ``y``, ``z`` wrapped into the unit cell."""
    value = float(ig.density(_point(ig, y, "y"), _point(ig, z, "z"), _tensor(ig, xi)))
    if not np.isfinite(value):
        raise ContractError(f"{ig.label} is not finite at y={y}, z={z}, xi={xi}")
    return value


def grad_f(ig: Integrand, y, z, xi) -> np.ndarray:
    """``df/dxi(y, z, xi)``, same shape as ``xi``.

    Kinked integrands need ``regularization_delta > 0``.
    """
    require_smooth(ig)
    g = ig.flux(_point(ig, y, "y"), _point(ig, z, "z"), _tensor(ig, xi))
    return np.asarray(g, dtype=float).reshape(ig.xi_shape)


def require_smooth(ig: Integrand) -> None:
    if not ig.smooth:
        raise NonsmoothIntegrandError(
            f"{ig.label} has a kink at xi=0; set regularization_delta > 0 to differentiate it"
        )
