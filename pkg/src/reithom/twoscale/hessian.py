"""Second-order sequences ``u + eps^2 U(x, x/eps) + eps^4 W(x, x/eps, x/eps^2)``.

The discrete hessian of such a sequence two-scale converges to
``D^2 u + D^2_y U + D^2_z W``; ``verify_theorem1`` measures that by pairing
against a test function on grids that refine with ``eps``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from reithom import logger
from reithom.errors import ContractError
from reithom.fields.grid import MacroGrid, check_commensurate, resolving_cells
from reithom.fields.periodic import integrate
from reithom.integrand.models import ScaleMap
from reithom.twoscale.limits import fit_order, sample_triple
from reithom.twoscale.models import CorrectorTriple, Generator, HessianReport, HessianRow

# Step of the central second difference applied to the generators.
GENERATOR_STEP = 1e-4


def _second(fn: Callable[[np.ndarray], np.ndarray], t: np.ndarray) -> np.ndarray:
    d = GENERATOR_STEP
    return (fn(t + d) - 2.0 * fn(t) + fn(t - d)) / d**2


def limit_hessian(ct: CorrectorTriple) -> Generator:
    """``(x, y, z) -> u''(x) + U_yy(x, y) + W_zz(x, y, z)``."""

    def value(x, y, z):
        return (
            _second(ct.u, x)
            + _second(lambda s: ct.U(x, s), y)
            + _second(lambda s: ct.W(x, y, s), z)
        )

    return value


def build_recovery_s2(ct: CorrectorTriple, epsilon: float, grid: MacroGrid) -> np.ndarray:
    """Node values of ``u + eps^2 U(x, x/eps) + eps^4 W(x, x/eps, x/eps^2)`` (1-D)."""
    if grid.dim != 1:
        raise ContractError("second-order sequences are built on 1-D grids")
    check_commensurate(epsilon, grid.length, grid.n_cells)
    x = grid.nodes()
    y, z = ScaleMap(epsilon).sample(x)
    values = ct.u(x) + epsilon**2 * ct.U(x, y) + epsilon**4 * ct.W(x, y, z)
    return np.asarray(np.broadcast_to(values, x.shape[:-1]), dtype=float)


def _hessian_pairing(
    ct: CorrectorTriple, test: Generator, epsilon: float, length: float, res_per_period: int
) -> HessianRow:
    grid = MacroGrid(length, resolving_cells(epsilon, length, res_per_period))
    values = build_recovery_s2(ct, epsilon, grid)
    second = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / grid.h**2
    x = grid.nodes()[1:-1]
    y, z = ScaleMap(epsilon).sample(x)
    weight = np.broadcast_to(test(x, y, z), second.shape)
    pairing = float(grid.h * np.sum(second * weight))
    return HessianRow(
        epsilon=epsilon, grid_points=grid.n_points, pairing=pairing, target=0.0, residual=0.0
    )


def verify_theorem1(
    ct: CorrectorTriple,
    epsilons,
    test: Generator,
    length: float = 1.0,
    res_per_period: int = 32,
    jobs: int = 1,
) -> HessianReport:
    """Pair the discrete hessian of ``u_eps`` with ``test(x, x/eps, x/eps^2)``.

    The target is the triple integral of the limit hessian against ``test``.
    ``monotone`` records whether residuals are non-increasing along ``epsilons``.
    """
    eps = [float(e) for e in epsilons]
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ContractError(f"epsilons must be strictly decreasing, got {eps}")

    limit = limit_hessian(ct)
    target = float(
        integrate(sample_triple(lambda x, y, z: limit(x, y, z) * test(x, y, z), length, 1))
    )

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(
            pool.map(lambda e: _hessian_pairing(ct, test, e, length, res_per_period), eps)
        )
    rows = [
        r.model_copy(update={"target": target, "residual": abs(r.pairing - target)})
        for r in rows
    ]
    residuals = [r.residual for r in rows]
    monotone = all(b <= a for a, b in zip(residuals, residuals[1:]))
    if not monotone:
        logger.warning(f"Hessian pairing residuals are not monotone: {residuals}")
    return HessianReport(
        rows=rows, target=target, monotone=monotone, fitted_order=fit_order(eps, residuals)
    )
