"""Report models for N-function diagnostics."""

from pydantic import BaseModel, Field


class Delta2Report(BaseModel):
    """Outcome of the sampled Delta_2 check ``B(2t) <= alpha B(t)`` for ``t >= t0``."""

    holds: bool = Field(description="Heuristic verdict on the inspected range.")
    alpha: float | None = Field(
        None, description="Supremum of B(2t)/B(t) on the grid (None when rejected)."
    )
    t0: float | None = Field(
        None, description="Threshold from which the bound is claimed (None when rejected)."
    )
    t_range: tuple[float, float] = Field(description="Inspected [t_min, t_max].")
    n_samples: int = Field(description="Geometric grid size.")
    heuristic: bool = Field(
        True, description="Always true: no finite grid certifies Delta_2."
    )


class NFunctionCheck(BaseModel):
    """One sampled N-function invariant."""

    name: str
    passed: bool
    worst: float = Field(description="Worst observed value of the checked quantity.")


class NFunctionReport(BaseModel):
    """All sampled invariants of one N-function."""

    label: str
    checks: list[NFunctionCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> NFunctionCheck:
        return next(c for c in self.checks if c.name == name)


class NFunctionSample(BaseModel):
    t: float
    B: float
    b: float
    Bconj: float


class NFunctionCheckReport(BaseModel):
    """JSON report of ``reithom nfunction check``.

    ``delta2`` is the verdict for B; ``delta2_conjugate`` the verdict for its
    conjugate. When either fails, ``suspects`` names both candidates since the
    sampled check cannot tell which one breaks the standing assumption.
    """

    label: str
    delta2: Delta2Report
    delta2_conjugate: Delta2Report | None = None
    suspects: list[str] = Field(default_factory=list)
    invariants: NFunctionReport | None = None
    samples: list[NFunctionSample] = Field(default_factory=list)
