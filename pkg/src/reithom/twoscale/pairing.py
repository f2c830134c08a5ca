"""Reiterated two-scale pairings, norm convergence and averaging checks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable

import numpy as np

from reithom import logger
from reithom.fields.periodic import integrate
from reithom.orlicz.luxemburg import LuxemburgNormRequest, luxemburg_norm
from reithom.orlicz.nfunction import NFunction
from reithom.twoscale.limits import fit_order, richardson, sample_triple
from reithom.twoscale.models import (
    AveragingReport,
    AveragingRow,
    Generator,
    NormReport,
    NormRow,
    OscillatingSequence,
    PairingReport,
    PairingRow,
)


def _pair_once(seq: OscillatingSequence, test: Generator, epsilon: float) -> float:
    x, y, z, u = seq.sample(epsilon)
    weight = np.broadcast_to(test(x, y, z), u.shape)
    return float(seq.grid.measure * np.mean(u * weight))


def _map(fn: Callable[[float], float], epsilons, jobs: int) -> list[float]:
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        return list(pool.map(fn, epsilons))


def two_scale_pair(
    seq: OscillatingSequence,
    test: Generator,
    test_label: str = "test",
    target: float | None = None,
    jobs: int = 1,
) -> PairingReport:
    """``int_Omega u_eps(x) test(x, x/eps, x/eps^2) dx`` per epsilon.

    ``target`` defaults to the triple integral of ``v * test``; the limit
    estimate extrapolates the last two pairings with the fitted order.
    """
    if target is None:
        product = sample_triple(
            lambda x, y, z: seq.generator(x, y, z) * test(x, y, z), seq.grid.length, seq.grid.dim
        )
        target = float(integrate(product))

    values = _map(lambda e: _pair_once(seq, test, e), seq.epsilons, jobs)
    rows = [
        PairingRow(epsilon=e, pairing=v, target=target, residual=abs(v - target))
        for e, v in zip(seq.epsilons, values)
    ]
    order = fit_order(seq.epsilons, [r.residual for r in rows])
    report = PairingReport(
        sequence=seq.label,
        test=test_label,
        rows=rows,
        target=target,
        limit_estimate=richardson(seq.epsilons, values, order),
        fitted_order=order,
    )
    logger.info(
        f"Pairing {seq.label} x {test_label}: limit ~ {report.limit_estimate:.10g} "
        f"(target {target:.10g})"
    )
    return report


def luxemburg_limit_check(seq: OscillatingSequence, nf: NFunction, jobs: int = 1) -> NormReport:
    """``||u_eps||_{B, Omega}`` per epsilon against ``||v||_{B, Omega x Y x Z}``."""
    field = sample_triple(seq.generator, seq.grid.length, seq.grid.dim)
    target = luxemburg_norm(LuxemburgNormRequest(field, nf, field.measure))

    def norm(epsilon: float) -> float:
        *_, u = seq.sample(epsilon)
        return luxemburg_norm(LuxemburgNormRequest(u, nf, seq.grid.measure))

    norms = _map(norm, seq.epsilons, jobs)
    return NormReport(
        sequence=seq.label,
        nfunction=nf.label,
        target=target,
        rows=[
            NormRow(epsilon=e, norm=n, target=target, residual=abs(n - target))
            for e, n in zip(seq.epsilons, norms)
        ],
    )


def averaging_consistency(
    seq: OscillatingSequence,
    test_x: Callable[[np.ndarray], np.ndarray],
    test_xy: Callable[[np.ndarray, np.ndarray], np.ndarray],
    jobs: int = 1,
) -> AveragingReport:
    """Pairings with tests free of ``z`` (or of ``y`` and ``z``) against averaged limits.

    The targets are built by first averaging the generator over ``Z`` (or
    ``Y x Z``) and then integrating; ``consistency_gap`` compares them with the
    plain triple integrals.
    """
    dim = seq.grid.dim
    field = sample_triple(seq.generator, seq.grid.length, dim)
    points = field.points()
    x, y = points[..., :dim], points[..., dim : 2 * dim]
    z_axes = tuple(range(2 * dim, 3 * dim))
    yz_axes = tuple(range(dim, 3 * dim))

    over_z = np.mean(field.values, axis=z_axes)
    x_y = x[(...,) + (0,) * dim + (slice(None),)]
    y_y = y[(...,) + (0,) * dim + (slice(None),)]
    target_xy = float(field.measure * np.mean(over_z * test_xy(x_y, y_y)))

    over_yz = np.mean(field.values, axis=yz_axes)
    x_x = x[(...,) + (0,) * (2 * dim) + (slice(None),)]
    target_x = float(field.measure * np.mean(over_yz * test_x(x_x)))

    triple_xy = float(integrate(replace(field, values=field.values * test_xy(x, y))))
    triple_x = float(integrate(replace(field, values=field.values * test_x(x))))
    gap = max(abs(triple_xy - target_xy), abs(triple_x - target_x))

    def row(epsilon: float) -> AveragingRow:
        xs, ys, _, u = seq.sample(epsilon)
        p_xy = float(seq.grid.measure * np.mean(u * test_xy(xs, ys)))
        p_x = float(seq.grid.measure * np.mean(u * test_x(xs)))
        return AveragingRow(
            epsilon=epsilon,
            pairing_xy=p_xy,
            residual_xy=abs(p_xy - target_xy),
            pairing_x=p_x,
            residual_x=abs(p_x - target_x),
        )

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(pool.map(row, seq.epsilons))
    return AveragingReport(
        sequence=seq.label,
        rows=rows,
        target_xy=target_xy,
        target_x=target_x,
        consistency_gap=gap,
    )
