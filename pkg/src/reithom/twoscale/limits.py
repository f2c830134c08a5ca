"""Triple-domain quadrature, order fits and Richardson extrapolation."""

from __future__ import annotations

from typing import Callable

import numpy as np

from reithom.fields.periodic import Cells, PeriodicField

# Residuals at or below this count as exact.
NOISE_FLOOR = 1e-12


def triple_resolution(dim: int) -> int:
    return 64 if dim == 1 else 8


def sample_triple(
    fn: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    length: float,
    dim: int,
    resolution: int | None = None,
) -> PeriodicField:
    """``fn(x, y, z)`` sampled at midpoints of ``(0, L)^N x Y x Z``."""
    res = resolution or triple_resolution(dim)

    def split(points: np.ndarray) -> np.ndarray:
        x, y, z = points[..., :dim], points[..., dim : 2 * dim], points[..., 2 * dim :]
        return np.broadcast_to(fn(x, y, z), points.shape[:-1])

    return PeriodicField.from_function(split, Cells.OMEGA_YZ, res, dim=dim, length=length)


def fit_order(epsilons, residuals, floor: float = NOISE_FLOOR) -> float | None:
    """Slope of ``log residual`` against ``log eps``; ``None`` below the floor."""
    eps = np.asarray(epsilons, dtype=float)
    res = np.abs(np.asarray(residuals, dtype=float))
    keep = res > floor
    if keep.sum() < 2:
        return None
    slope, _ = np.polyfit(np.log(eps[keep]), np.log(res[keep]), 1)
    return float(slope)


def richardson(epsilons, values, order: float | None) -> float:
    """Extrapolate the last two values to ``eps -> 0`` assuming ``C eps^order`` error."""
    values = list(values)
    if len(values) < 2 or order is None or order <= 0:
        return float(values[-1])
    e1, e2 = epsilons[-2], epsilons[-1]
    w = (e1 / e2) ** order
    return float((w * values[-1] - values[-2]) / (w - 1.0))
