"""Batched preconditioned Barzilai-Borwein descent with nonmonotone backtracking.

Every batch member is an independent problem with its own step, memory and
stopping state; members that stop are frozen while the rest keep iterating.
The best iterate seen is returned, not the last one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from reithom import logger
from reithom.cell.models import SolverParams


class Objective(Protocol):
    """A batch of convex energies over arrays shaped ``(B, ...)``.

    ``members`` selects which batch entries the leading axis of ``x`` holds.
    """

    def energy(self, x: np.ndarray, members: np.ndarray) -> np.ndarray: ...

    def energy_and_gradient(
        self, x: np.ndarray, members: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]: ...

    def precondition(self, g: np.ndarray) -> np.ndarray: ...

    def project(self, x: np.ndarray) -> np.ndarray: ...


@dataclass
class MinimizeResult:
    x: np.ndarray
    energy: np.ndarray
    iterations: np.ndarray
    grad_norm: np.ndarray
    converged: np.ndarray
    stop_reason: list[str]


def _inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum((a * b).reshape(a.shape[0], -1), axis=1)


def _expand(v: np.ndarray, like: np.ndarray) -> np.ndarray:
    return v.reshape((-1,) + (1,) * (like.ndim - 1))


def minimize_bb(objective: Objective, x0: np.ndarray, params: SolverParams) -> MinimizeResult:
    """Minimize every batch member of ``objective`` starting from ``x0``."""
    batch = x0.shape[0]
    everyone = np.arange(batch)
    lo_step, hi_step = params.step_bounds

    x = objective.project(np.array(x0, dtype=float))
    E, g = objective.energy_and_gradient(x, everyone)
    d = objective.precondition(g)
    gnorm = np.sqrt(np.maximum(_inner(g, d), 0.0))

    step = np.ones(batch)
    memory = np.repeat(E[:, None], params.window, axis=1)
    best_x, best_E, best_gnorm = x.copy(), E.copy(), gnorm.copy()
    best_trace = [best_E.copy()]

    iterations = np.zeros(batch, dtype=int)
    converged = gnorm < params.grad_tol
    active = ~converged
    reasons = ["gradient" if c else "" for c in converged]

    for it in range(1, params.max_iter + 1):
        if not active.any():
            break
        reference = memory.max(axis=1)
        slope = _inner(g, d)

        trial = step.copy()
        accepted = ~active
        x_new, E_new = x.copy(), E.copy()
        for _ in range(params.max_backtracks):
            pending = np.flatnonzero(~accepted)
            if pending.size == 0:
                break
            xt = objective.project(x[pending] - _expand(trial[pending], d) * d[pending])
            with np.errstate(over="ignore", invalid="ignore"):
                Et = objective.energy(xt, pending)
            ok = np.isfinite(Et) & (
                Et <= reference[pending] - params.armijo * trial[pending] * slope[pending]
            )
            x_new[pending[ok]] = xt[ok]
            E_new[pending[ok]] = Et[ok]
            accepted[pending[ok]] = True
            trial[pending[~ok]] *= 0.5

        stalled = active & ~accepted
        for i in np.flatnonzero(stalled):
            reasons[i] = "line-search"
        active &= accepted

        moving = np.flatnonzero(active)
        if moving.size:
            E_m, g_m = objective.energy_and_gradient(x_new[moving], moving)
            d_m = objective.precondition(g_m)
            s = x_new[moving] - x[moving]
            y = g_m - g[moving]
            sy = _inner(s, y)
            yPy = _inner(y, d_m - d[moving])
            with np.errstate(divide="ignore", invalid="ignore"):
                bb = np.where((sy > 0) & (yPy > 0), sy / yPy, trial[moving])
            step[moving] = np.clip(bb, lo_step, hi_step)

            x[moving], E[moving], g[moving], d[moving] = x_new[moving], E_m, g_m, d_m
            gnorm[moving] = np.sqrt(np.maximum(_inner(g_m, d_m), 0.0))
            memory[moving, it % params.window] = E_m
            iterations[moving] = it

            better = moving[E_m <= best_E[moving]]
            best_x[better], best_E[better], best_gnorm[better] = x[better], E[better], gnorm[better]

        best_trace.append(best_E.copy())
        done_grad = active & (gnorm < params.grad_tol)
        done_energy = np.zeros(batch, dtype=bool)
        if len(best_trace) > params.window:
            past = best_trace[-1 - params.window]
            drop = past - best_E
            done_energy = active & ~done_grad & (
                drop <= params.energy_tol * np.maximum(np.abs(best_E), 1e-300)
            )
        for i in np.flatnonzero(done_grad):
            reasons[i] = "gradient"
        for i in np.flatnonzero(done_energy):
            reasons[i] = "energy"
        converged |= done_grad | done_energy
        active &= ~(done_grad | done_energy)

    for i in np.flatnonzero(active):
        reasons[i] = "max-iter"

    result = MinimizeResult(
        x=best_x,
        energy=best_E,
        iterations=iterations,
        grad_norm=best_gnorm,
        converged=converged,
        stop_reason=reasons,
    )
    if not converged.all():
        logger.debug(
            f"{int((~converged).sum())}/{batch} problems stopped unconverged "
            f"({', '.join(sorted(set(r for r, c in zip(reasons, converged) if not c)))})"
        )
    return result
