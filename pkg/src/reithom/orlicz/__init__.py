"""Orlicz-space scalar machinery: N-functions, conjugates, Delta_2, Luxemburg norms."""

from reithom.orlicz.catalog import nfunction_from_spec
from reithom.orlicz.check import check_nfunction
from reithom.orlicz.luxemburg import (
    LuxemburgNormRequest,
    holder_check,
    luxemburg_norm,
    modular,
)
from reithom.orlicz.models import Delta2Report, NFunctionCheckReport, NFunctionReport
from reithom.orlicz.nfunction import (
    NFunction,
    conjugate,
    conjugate_nfunction,
    delta2_check,
    eval_pair,
    validate_nfunction,
)

__all__ = [
    # N-functions
    "NFunction",
    "check_nfunction",
    "conjugate",
    "conjugate_nfunction",
    "delta2_check",
    "eval_pair",
    "nfunction_from_spec",
    "validate_nfunction",
    # Norms
    "LuxemburgNormRequest",
    "holder_check",
    "luxemburg_norm",
    "modular",
    # Reports
    "Delta2Report",
    "NFunctionCheckReport",
    "NFunctionReport",
]
