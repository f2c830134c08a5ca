"""Reiterated two-scale convergence checks, recovery sequences and hessian limits."""

from reithom.twoscale.hessian import build_recovery_s2, limit_hessian, verify_theorem1
from reithom.twoscale.limits import fit_order, richardson, sample_triple
from reithom.twoscale.models import (
    AveragingReport,
    CorrectorTriple,
    HessianReport,
    NormReport,
    OscillatingSequence,
    PairingReport,
    RecoveryReport,
)
from reithom.twoscale.pairing import averaging_consistency, luxemburg_limit_check, two_scale_pair
from reithom.twoscale.recovery import build_recovery_s1, recovery_report
from reithom.twoscale.sequences import make_sequence, named_test, named_triple

__all__ = [
    "AveragingReport",
    "CorrectorTriple",
    "HessianReport",
    "NormReport",
    "OscillatingSequence",
    "PairingReport",
    "RecoveryReport",
    "averaging_consistency",
    "build_recovery_s1",
    "build_recovery_s2",
    "fit_order",
    "limit_hessian",
    "luxemburg_limit_check",
    "make_sequence",
    "named_test",
    "named_triple",
    "recovery_report",
    "richardson",
    "sample_triple",
    "two_scale_pair",
    "verify_theorem1",
]
