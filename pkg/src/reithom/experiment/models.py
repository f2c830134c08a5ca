"""JSON experiment configurations, one model per ``kind``."""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal, Union

import click
from pydantic import BaseModel, BeforeValidator, Field, TypeAdapter, ValidationError

from reithom.cell.models import LatticeAxis, SolverParams
from reithom.errors import ConfigError, ReportIOError
from reithom.integrand.catalog import catalog
from reithom.integrand.models import Integrand
from reithom.utils.cli import parse_eps_list


class IntegrandSpec(BaseModel):
    """A catalog integrand with its parameters."""

    name: str = Field(description="Catalog name, e.g. quadratic_laminate.")
    params: dict[str, Any] = Field(default_factory=dict)
    order: Literal[1, 2] = 1

    def build(self, seed: int = 0) -> Integrand:
        return catalog(self.name, {**self.params, "order": self.order}, seed=seed)


def _epsilons(value: Any) -> list[float]:
    if isinstance(value, str):
        try:
            return parse_eps_list(value)
        except click.BadParameter as e:
            raise ValueError(e.message)
    return value


Epsilons = Annotated[list[float], BeforeValidator(_epsilons)]


class _Experiment(BaseModel):
    name: str = Field("experiment", description="Prefix of every file the run writes.")
    seed: int | None = Field(None, description="Overrides the global --seed.")


class NFunctionCheckConfig(_Experiment):
    kind: Literal["nfunction-check"]
    nfunction: str = Field(description="power:p, plog:p,q or exp.")
    t_min: float = Field(1e-2, gt=0)
    t_max: float = Field(1e2, gt=0)
    samples: int = Field(64, ge=16)


class CellInnerConfig(_Experiment):
    kind: Literal["cell-inner"]
    integrand: IntegrandSpec
    xi: list[float]
    y: list[float] = Field(default_factory=lambda: [0.0])
    resolution: int = Field(256, ge=8)
    scheme: Literal["central", "spectral"] = "central"
    solver: SolverParams = Field(default_factory=SolverParams)


class HomTableConfig(_Experiment):
    kind: Literal["hom-table"]
    integrand: IntegrandSpec
    lattice: list[LatticeAxis] = Field(description="One axis per free xi coordinate.")
    y_samples: int = Field(64, ge=1)
    resolution: int = Field(256, ge=8)
    outer_resolution: int | None = Field(
        None, ge=8, description="Also tabulate f_hom_bar on the lattice at this Y resolution."
    )
    scheme: Literal["central", "spectral"] = "central"
    solver: SolverParams = Field(default_factory=SolverParams)


class CellOuterConfig(_Experiment):
    kind: Literal["cell-outer"]
    integrand: IntegrandSpec
    xi: list[float]
    table: str | None = Field(None, description="Existing inner table; tabulated when absent.")
    lattice: list[LatticeAxis] | None = None
    y_samples: int = Field(64, ge=1)
    inner_resolution: int = Field(256, ge=8)
    outer_resolution: int = Field(256, ge=8)
    scheme: Literal["central", "spectral"] = "central"
    solver: SolverParams = Field(default_factory=SolverParams)


class TwoScaleConfig(_Experiment):
    kind: Literal["twoscale"]
    sequence: str
    tests: list[str] = Field(default_factory=lambda: ["one"])
    epsilons: Epsilons
    points_per_period: int = Field(16, ge=8)
    nfunction: str | None = Field(None, description="Also check Luxemburg norm limits.")


class CorrectorConfig(_Experiment):
    kind: Literal["corrector"]
    triple: str = Field(description="macro, slow or fast.")
    test: str
    epsilons: Epsilons
    res_per_period: int = Field(32, ge=8)
    length: float = Field(1.0, gt=0)


class GammaStudyConfig(_Experiment):
    kind: Literal["gamma-study"]
    integrand: IntegrandSpec
    xi0: list[float]
    epsilons: Epsilons
    res_per_period: int = Field(16, ge=8)
    length: float = Field(1.0, gt=0)
    table: str | None = Field(None, description="Outer table for non-closed-form integrands.")
    solver: SolverParams = Field(default_factory=SolverParams)


ExperimentConfig = Annotated[
    Union[
        NFunctionCheckConfig,
        CellInnerConfig,
        CellOuterConfig,
        HomTableConfig,
        TwoScaleConfig,
        CorrectorConfig,
        GammaStudyConfig,
    ],
    Field(discriminator="kind"),
]


KINDS = (
    "nfunction-check",
    "cell-inner",
    "cell-outer",
    "hom-table",
    "twoscale",
    "corrector",
    "gamma-study",
)


_adapter: TypeAdapter = TypeAdapter(ExperimentConfig)


def parse_config(text: str) -> ExperimentConfig:
    """Validate a JSON experiment; schema errors become ``ConfigError``."""
    try:
        return _adapter.validate_json(text)
    except ValidationError as e:
        raise ConfigError(f"invalid experiment config: {e.errors(include_url=False)}") from e


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"cannot read config {path}: {e}") from e
    return parse_config(text)


def dump_config(config: ExperimentConfig) -> str:
    return _adapter.dump_json(config, indent=2).decode() + "\n"


class CellRow(BaseModel):
    """One solved cell problem as a CSV row."""

    level: str
    y: str = ""
    energy: float
    iterations: int
    grad_norm: float
    converged: bool
    stop_reason: str = ""


class RunSummary(BaseModel):
    """JSON summary of one ``reithom run``."""

    name: str
    kind: str
    seed: int
    files: list[str] = Field(default_factory=list)
    flagged: list[str] = Field(default_factory=list, description="Non-converged results.")
    values: dict[str, float | None] = Field(default_factory=dict)
