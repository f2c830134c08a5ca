"""The ``nfunction-check`` report: Delta_2 for B and its conjugate, invariants, samples."""

from __future__ import annotations

import numpy as np

from reithom import logger
from reithom.errors import UnboundedConjugateError
from reithom.orlicz.luxemburg import holder_check
from reithom.orlicz.models import NFunctionCheckReport, NFunctionSample
from reithom.orlicz.nfunction import (
    NFunction,
    conjugate_nfunction,
    delta2_check,
    validate_nfunction,
)

REPORT_SAMPLES = 16


def check_nfunction(
    nf: NFunction,
    t_min: float = 1e-2,
    t_max: float = 1e2,
    n_samples: int = 64,
    seed: int = 0,
) -> NFunctionCheckReport:
    delta2 = delta2_check(nf, t_min, t_max, n_samples)
    conj = conjugate_nfunction(nf)
    try:
        delta2_conj = delta2_check(conj, t_min, t_max, n_samples)
    except UnboundedConjugateError as e:
        logger.warning(f"conjugate of {nf.label} is unbounded on the range: {e}")
        delta2_conj = None

    suspects = []
    if not delta2.holds or (delta2_conj is not None and not delta2_conj.holds):
        suspects = [nf.label, conj.label]

    t = np.geomspace(t_min, t_max, REPORT_SAMPLES)
    with np.errstate(over="ignore"):
        values, slopes = nf(t), nf.b(t)
    conj_values = conj(t)
    samples = [
        NFunctionSample(t=float(a), B=float(b), b=float(c), Bconj=float(d))
        for a, b, c, d in zip(t, values, slopes, conj_values)
    ]
    invariants = validate_nfunction(nf)
    try:
        invariants.checks.append(holder_check(nf, seed))
    except UnboundedConjugateError as e:
        logger.warning(f"Hölder check of {nf.label} skipped: {e}")

    report = NFunctionCheckReport(
        label=nf.label,
        delta2=delta2,
        delta2_conjugate=delta2_conj,
        suspects=suspects,
        invariants=invariants,
        samples=samples,
    )
    logger.info(
        f"N-function {nf.label}: delta2={delta2.holds}, "
        f"conjugate delta2={delta2_conj.holds if delta2_conj else None}"
    )
    return report
