"""Run one experiment config: dispatch on ``kind`` and persist its reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch
from pathlib import Path

import numpy as np

from reithom import logger
from reithom.cell.models import CellProblem, CellSolution
from reithom.cell.solver import solve_inner, solve_outer, tabulate, tabulate_outer
from reithom.cell.table import load_table, save_table
from reithom.errors import ConfigError
from reithom.experiment.models import (
    CellInnerConfig,
    CellOuterConfig,
    CellRow,
    CorrectorConfig,
    ExperimentConfig,
    GammaStudyConfig,
    HomTableConfig,
    NFunctionCheckConfig,
    RunSummary,
    TwoScaleConfig,
)
from reithom.experiment.report import emit_report, write_json
from reithom.gamma.models import StudyRow
from reithom.gamma.study import boundary_grid, convergence_study
from reithom.orlicz.catalog import nfunction_from_spec
from reithom.orlicz.check import check_nfunction
from reithom.twoscale.hessian import verify_theorem1
from reithom.twoscale.models import HessianRow, NormRow, PairingRow
from reithom.twoscale.pairing import luxemburg_limit_check, two_scale_pair
from reithom.twoscale.sequences import make_sequence, named_test, named_triple
from reithom.utils.cli import RunOptions


@dataclass
class _Context:
    """What every kind handler needs: options, output directory and the growing summary."""

    options: RunOptions
    seed: int
    summary: RunSummary
    out_dir: Path = field(init=False)

    def __post_init__(self) -> None:
        self.out_dir = self.options.out_dir

    def path(self, suffix: str) -> Path:
        return self.out_dir / f"{self.summary.name}_{suffix}"

    def wrote(self, path: Path) -> None:
        self.summary.files.append(str(path))

    def flag(self, what: str) -> None:
        logger.warning(f"{self.summary.name}: {what} is flagged")
        self.summary.flagged.append(what)


def _cell_row(sol: CellSolution, level: str, y: str = "") -> CellRow:
    return CellRow(
        level=level,
        y=y,
        energy=sol.energy,
        iterations=sol.iterations,
        grad_norm=sol.final_grad_norm,
        converged=sol.converged,
        stop_reason=sol.stop_reason,
    )


@singledispatch
def _dispatch(config, ctx: _Context) -> None:
    raise ConfigError(f"unsupported experiment {type(config).__name__}")


@_dispatch.register
def _nfunction_check(config: NFunctionCheckConfig, ctx: _Context) -> None:
    report = check_nfunction(
        nfunction_from_spec(config.nfunction),
        config.t_min,
        config.t_max,
        config.samples,
        seed=ctx.seed,
    )
    ctx.wrote(emit_report(report, "json", ctx.path("nfunction.json")))
    ctx.summary.values["delta2"] = float(report.delta2.holds)
    ctx.summary.values["invariants_passed"] = float(report.invariants.passed)


@_dispatch.register
def _cell_inner(config: CellInnerConfig, ctx: _Context) -> None:
    ig = config.integrand.build(ctx.seed)
    cp = CellProblem(
        ig,
        "inner",
        np.array(config.xi),
        config.resolution,
        frozen_y=config.y,
        scheme=config.scheme,
        params=config.solver,
    )
    sol = solve_inner(cp)
    y = ",".join(repr(v) for v in config.y)
    ctx.wrote(emit_report([_cell_row(sol, "inner", y)], "csv", ctx.path("inner.csv"), CellRow))
    ctx.summary.values["f_hom"] = sol.energy
    if not sol.converged:
        ctx.flag("inner cell problem")


@_dispatch.register
def _hom_table(config: HomTableConfig, ctx: _Context) -> None:
    ig = config.integrand.build(ctx.seed)
    jobs = ctx.options.jobs
    inner = tabulate(
        ig, config.lattice, config.y_samples, config.resolution, config.solver, config.scheme, jobs
    )
    ctx.wrote(save_table(inner, ctx.path("inner")))
    if not inner.all_converged:
        ctx.flag("inner table")
    if config.outer_resolution is None:
        return
    outer = tabulate_outer(
        inner, ig, config.lattice, config.outer_resolution, config.solver, config.scheme, jobs
    )
    ctx.wrote(save_table(outer, ctx.path("outer")))
    if not outer.all_converged:
        ctx.flag("outer table")


@_dispatch.register
def _cell_outer(config: CellOuterConfig, ctx: _Context) -> None:
    ig = config.integrand.build(ctx.seed)
    if config.table:
        inner = load_table(config.table)
    elif config.lattice:
        inner = tabulate(
            ig,
            config.lattice,
            config.y_samples,
            config.inner_resolution,
            config.solver,
            config.scheme,
            ctx.options.jobs,
        )
        ctx.wrote(save_table(inner, ctx.path("inner")))
    else:
        raise ConfigError("cell-outer needs either an inner table or a lattice to tabulate")
    cp = CellProblem(
        ig,
        "outer",
        np.array(config.xi),
        config.outer_resolution,
        table=inner,
        scheme=inner.scheme,
        params=config.solver,
    )
    sol = solve_outer(cp, jobs=ctx.options.jobs)
    ctx.wrote(emit_report([_cell_row(sol, "outer")], "csv", ctx.path("outer.csv"), CellRow))
    ctx.summary.values["f_hom_bar"] = sol.energy
    if not sol.converged:
        ctx.flag("outer cell problem")


@_dispatch.register
def _two_scale(config: TwoScaleConfig, ctx: _Context) -> None:
    seq = make_sequence(
        config.sequence, config.epsilons, points_per_period=config.points_per_period
    )
    for name in config.tests:
        report = two_scale_pair(seq, named_test(name), name, jobs=ctx.options.jobs)
        ctx.wrote(emit_report(report.rows, "csv", ctx.path(f"pair_{name}.csv"), PairingRow))
        ctx.summary.values[f"limit_{name}"] = report.limit_estimate
    if config.nfunction:
        norms = luxemburg_limit_check(
            seq, nfunction_from_spec(config.nfunction), jobs=ctx.options.jobs
        )
        ctx.wrote(emit_report(norms.rows, "csv", ctx.path("norm.csv"), NormRow))
        ctx.summary.values["norm_target"] = norms.target
        ctx.summary.values["norm_max_residual"] = norms.max_residual


@_dispatch.register
def _corrector(config: CorrectorConfig, ctx: _Context) -> None:
    report = verify_theorem1(
        named_triple(config.triple),
        config.epsilons,
        named_test(config.test),
        length=config.length,
        res_per_period=config.res_per_period,
        jobs=ctx.options.jobs,
    )
    ctx.wrote(emit_report(report.rows, "csv", ctx.path("hessian.csv"), HessianRow))
    ctx.summary.values["target"] = report.target
    ctx.summary.values["fitted_order"] = report.fitted_order
    if not report.monotone:
        ctx.flag("hessian residuals")


@_dispatch.register
def _gamma_study(config: GammaStudyConfig, ctx: _Context) -> None:
    ig = config.integrand.build(ctx.seed)
    grid = boundary_grid(ig, config.xi0, config.length)
    table = load_table(config.table) if config.table else None
    study = convergence_study(
        ig,
        grid,
        config.epsilons,
        table=table,
        res_per_period=config.res_per_period,
        params=config.solver,
        jobs=ctx.options.jobs,
    )
    ctx.wrote(emit_report(study.rows(), "csv", ctx.path("study.csv"), StudyRow))
    summary = study.summary(config.integrand.name, np.asarray(config.xi0))
    ctx.wrote(emit_report(summary, "json", ctx.path("summary.json")))
    ctx.summary.values["hom_value"] = study.homogenized_value
    ctx.summary.values["final_residual"] = study.residuals[-1]
    for run in study.runs:
        if not run.converged:
            ctx.flag(f"F_eps minimization at eps={run.epsilon:g}")


def run(config: ExperimentConfig, options: RunOptions | None = None) -> RunSummary:
    """Execute ``config`` and write its reports plus ``<name>_run.json`` to ``out_dir``.

    Non-converged results are listed in ``RunSummary.flagged``; deciding whether
    that is fatal is left to the caller.
    """
    options = options or RunOptions()
    seed = options.seed if config.seed is None else config.seed
    ctx = _Context(options, seed, RunSummary(name=config.name, kind=config.kind, seed=seed))
    logger.info(f"Running {config.kind} experiment '{config.name}' (seed {seed})")
    _dispatch(config, ctx)
    path = write_json(ctx.path("run.json"), ctx.summary)
    logger.info(f"Experiment '{config.name}' wrote {len(ctx.summary.files)} files to {ctx.out_dir}")
    ctx.summary.files.append(str(path))
    return ctx.summary
