"""Error hierarchy shared by every reithom module.

Each error carries a stable machine-readable ``code`` and the process
``exit_code`` the CLI uses when the error escapes a command.
"""

from __future__ import annotations

import json


class ReithomError(Exception):
    """Base class for all reithom errors."""

    code: str = "error"
    exit_code: int = 1

    def to_json(self) -> str:
        """Machine-readable single-line error payload."""
        return json.dumps({"error": self.code, "message": str(self)})


class ConfigError(ReithomError, ValueError):
    code = "config"
    exit_code = 2


class ContractError(ReithomError, ValueError):
    """A precondition of an operation was violated (shapes, commensurability)."""

    code = "contract"
    exit_code = 3


class ResolutionError(ReithomError, ValueError):
    code = "resolution"
    exit_code = 4


class DomainError(ReithomError, ValueError):
    code = "domain"
    exit_code = 5


class DataError(ReithomError, ValueError):
    code = "data"
    exit_code = 6


class InvalidNFunctionError(ReithomError, ValueError):
    code = "invalid-nfunction"
    exit_code = 7


class UnboundedConjugateError(ReithomError, ArithmeticError):
    code = "unbounded-conjugate"
    exit_code = 8


class NonsmoothIntegrandError(ReithomError, ValueError):
    code = "nonsmooth"
    exit_code = 9


class TableRangeError(ReithomError, ValueError):
    code = "range"
    exit_code = 10


class NonConvergenceError(ReithomError, RuntimeError):
    code = "non-convergence"
    exit_code = 11


class ReportIOError(ReithomError, OSError):
    code = "io"
    exit_code = 12
