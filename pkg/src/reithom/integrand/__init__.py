"""Multiscale integrands f(y, z, xi), their gradients and sampled hypothesis checks."""

from reithom.integrand.catalog import CATALOG, a1, a2, catalog, custom_integrand
from reithom.integrand.evaluate import eval_f, grad_f, require_smooth
from reithom.integrand.expression import CoefficientExpression, compile_coefficient
from reithom.integrand.models import (
    Growth,
    HypothesisCheck,
    Integrand,
    Profile,
    ScaleMap,
    ValidationReport,
)
from reithom.integrand.validate import validate

__all__ = [
    # Models
    "Growth",
    "Integrand",
    "Profile",
    "ScaleMap",
    # Operations
    "eval_f",
    "grad_f",
    "require_smooth",
    "validate",
    # Catalog
    "CATALOG",
    "a1",
    "a2",
    "catalog",
    "custom_integrand",
    "CoefficientExpression",
    "compile_coefficient",
    # Reports
    "HypothesisCheck",
    "ValidationReport",
]
