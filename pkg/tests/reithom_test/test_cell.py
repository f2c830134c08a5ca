"""Unit tests for the minimizer, cell problems, homogenized tables and 1-D oracles."""

import dataclasses

import numpy as np
import pytest

from reithom.cell import (
    CellProblem,
    HomTable,
    LatticeAxis,
    SolverParams,
    clamped_oracle_s2,
    constant_flux_value,
    dirichlet_oracle_s1,
    eval_interp,
    harmonic_mean,
    inner_oracle,
    load_table,
    minimize_bb,
    p_harmonic_mean,
    reiterated_correctors,
    reiterated_oracle,
    save_table,
    solve_inner,
    solve_inner_batch,
    solve_outer,
    tabulate,
    tabulate_outer,
)
from reithom.cell.models import coords_to_tensor, free_indices, tensor_to_coords
from reithom.cell.operators import PeriodicOperator
from reithom.errors import (
    ContractError,
    DataError,
    NonsmoothIntegrandError,
    ReportIOError,
    TableRangeError,
)
from reithom.fields.periodic import Cells, cell_points
from reithom.gamma import energy_of
from reithom.integrand import Profile, a1, a2
from reithom.orlicz import nfunction_from_spec
from reithom.twoscale import build_recovery_s1, recovery_report

from .conftest import make_grid, make_integrand, make_quadratic_table

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


class _Quadratic:
    """``0.5 sum c x^2 - b_m . x`` per batch member ``m``."""

    def __init__(self, b: np.ndarray, c: np.ndarray, newton: bool = False):
        self.b = b
        self.c = c
        self.newton = newton

    def energy(self, x, members):
        return 0.5 * np.sum(self.c * x**2, axis=1) - np.sum(self.b[members] * x, axis=1)

    def energy_and_gradient(self, x, members):
        return self.energy(x, members), self.c * x - self.b[members]

    def precondition(self, g):
        return g / self.c if self.newton else g.copy()

    def project(self, x):
        return x


class _Blowup(_Quadratic):
    """Every trial point is infinite, so no step is ever accepted."""

    def energy(self, x, members):
        return np.full(x.shape[0], np.inf)


def _toy(batch: int = 3, n: int = 10, newton: bool = False) -> _Quadratic:
    rng = np.random.default_rng(1)
    return _Quadratic(rng.standard_normal((batch, n)), np.linspace(1.0, 10.0, n), newton)


def _laminate_table(y_samples: int = 16, resolution: int = 64) -> HomTable:
    ig = make_integrand("quadratic_laminate")
    return tabulate(ig, LatticeAxis(lo=-2.0, hi=2.0, count=9), y_samples, resolution)


# ---------------------------------------------------------------------------
# Minimizer
# ---------------------------------------------------------------------------


class TestMinimizeBB:
    """Batched Barzilai-Borwein descent on toy quadratics."""

    def test_converges_to_the_minimizer(self):
        objective = _toy()
        result = minimize_bb(objective, np.zeros((3, 10)), SolverParams())
        np.testing.assert_allclose(result.x, objective.b / objective.c, rtol=1e-5, atol=1e-6)
        assert result.converged.all()
        expected = -0.5 * np.sum(objective.b**2 / objective.c, axis=1)
        np.testing.assert_allclose(result.energy, expected, rtol=1e-10)

    def test_exact_preconditioner_needs_one_step(self):
        objective = _toy(newton=True)
        result = minimize_bb(objective, np.zeros((3, 10)), SolverParams())
        assert result.converged.all()
        assert result.stop_reason == ["gradient"] * 3
        assert result.iterations.max() == 1

    def test_member_starting_at_the_optimum_is_frozen(self):
        objective = _toy(batch=2)
        x0 = np.zeros((2, 10))
        x0[0] = objective.b[0] / objective.c
        result = minimize_bb(objective, x0, SolverParams())
        assert result.iterations[0] == 0
        assert result.stop_reason[0] == "gradient"
        assert result.iterations[1] > 0

    def test_iteration_cap(self):
        result = minimize_bb(_toy(), np.zeros((3, 10)), SolverParams(max_iter=1))
        assert not result.converged.any()
        assert result.stop_reason == ["max-iter"] * 3

    def test_line_search_failure(self):
        objective = _Blowup(np.ones((1, 4)), np.ones(4))
        result = minimize_bb(objective, np.zeros((1, 4)), SolverParams(max_backtracks=5))
        assert not result.converged[0]
        assert result.stop_reason == ["line-search"]
        # the starting point is the best iterate seen
        np.testing.assert_array_equal(result.x, np.zeros((1, 4)))


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


class TestOracles:
    """Closed-form one-dimensional homogenized values."""

    def test_harmonic_mean(self):
        assert harmonic_mean(a2) == pytest.approx(0.5, rel=1e-12)

    def test_p_harmonic_mean_reduces_to_harmonic(self):
        assert p_harmonic_mean(a2, 2.0) == pytest.approx(0.5, rel=1e-12)

    def test_p_harmonic_mean_needs_p_above_one(self):
        with pytest.raises(ContractError):
            p_harmonic_mean(a2, 1.0)

    def test_constant_flux_quadratic(self):
        value = constant_flux_value(Profile("quadratic"), np.array([1.0, 2.0]), 1.0)
        assert value == pytest.approx(4.0 / 3.0, rel=1e-10)

    def test_constant_flux_nfunction_profile(self):
        profile = Profile("nfunction", nfunction=nfunction_from_spec("plog:2,0"))
        value = constant_flux_value(profile, np.array([1.0, 2.0]), -1.0)
        assert value == pytest.approx(4.0 / 3.0, rel=1e-8)

    def test_constant_flux_at_zero(self):
        assert constant_flux_value(Profile("quadratic"), np.ones(3), 0.0) == 0.0

    def test_inner_oracle_laminate(self, laminate):
        # a1(0) = 1/2 times the harmonic mean 1/2 of a2
        assert inner_oracle(laminate, 0.0, 1.0) == pytest.approx(0.25, rel=1e-12)
        assert inner_oracle(laminate, 0.0, 2.0) == pytest.approx(1.0, rel=1e-12)

    def test_reiterated_oracle_laminate(self, laminate):
        assert reiterated_oracle(laminate, 1.0) == pytest.approx(0.25, rel=1e-12)

    def test_reiterated_oracle_without_power_profile(self):
        assert reiterated_oracle(make_integrand("constant_B"), 1.0) is None

    def test_oracles_are_one_dimensional(self):
        with pytest.raises(ContractError):
            inner_oracle(make_integrand("quadratic_laminate", dim=2), 0.0, 1.0)

    def test_dirichlet_oracle(self, laminate):
        assert dirichlet_oracle_s1(laminate, make_grid(0.25), 0.25) == pytest.approx(0.25)
        assert dirichlet_oracle_s1(laminate, make_grid(0.25, slope=2.0), 0.25) == pytest.approx(
            1.0
        )

    def test_clamped_oracle_constant_coefficient(self):
        ig = make_integrand("custom", coefficient="1", profile="quadratic", order=2)
        grid = make_grid(0.25, quadratic=True)
        # w = u'' = 1 is optimal at the n - 1 interior nodes
        assert clamped_oracle_s2(ig, grid, 0.25) == pytest.approx(1.0 - grid.h, rel=1e-9)


# ---------------------------------------------------------------------------
# Inner problems
# ---------------------------------------------------------------------------


class TestSolveInner:
    def test_laminate_matches_oracle(self, laminate):
        sol = solve_inner(CellProblem(laminate, "inner", np.array([1.0]), 64, frozen_y=[0.0]))
        assert sol.converged
        assert sol.energy == pytest.approx(0.25, rel=1e-7)
        assert sol.mean_flux.item() == pytest.approx(0.5, rel=1e-5)
        assert sol.corrector.cells is Cells.Z
        assert np.mean(sol.corrector.values) == pytest.approx(0.0, abs=1e-12)

    def test_spectral_scheme(self, laminate):
        cp = CellProblem(laminate, "inner", np.array([1.0]), 64, frozen_y=[0.0], scheme="spectral")
        assert solve_inner(cp).energy == pytest.approx(0.25, rel=1e-7)

    def test_p_laminate_matches_p_harmonic_oracle(self):
        ig = make_integrand("p_laminate", p=3)
        sol = solve_inner(CellProblem(ig, "inner", np.array([1.0]), 64, frozen_y=[0.0]))
        assert sol.energy == pytest.approx(inner_oracle(ig, 0.0, 1.0), rel=1e-5)

    def test_second_order_inner_problem(self):
        ig = make_integrand("p_laminate", p=2, order=2)
        sol = solve_inner(CellProblem(ig, "inner", np.ones(1), 32, frozen_y=[0.0]))
        assert sol.energy == pytest.approx(0.5, rel=1e-6)

    def test_oscillation_free_integrand_needs_no_corrector(self):
        ig = make_integrand("constant_B")
        sol = solve_inner(CellProblem(ig, "inner", np.array([1.5]), 32, frozen_y=[0.0]))
        assert sol.energy == pytest.approx(2.25)
        assert sol.iterations == 0
        assert sol.stop_reason == "gradient"
        np.testing.assert_array_equal(sol.corrector.values, 0.0)

    def test_batch_over_y(self, laminate):
        ys = np.array([[-0.25], [0.0], [0.25]])
        batch = solve_inner_batch(laminate, ys, np.ones((1, 1)), 64)
        expected = [0.5 * a1(y) for y in ys]
        np.testing.assert_allclose(batch.energy, expected, rtol=1e-7)
        assert batch.correctors.shape == (3, 64, 1)

    def test_unregularized_kink_is_rejected(self):
        ig = make_integrand("p_laminate", p=1.5, delta=0.0)
        with pytest.raises(NonsmoothIntegrandError):
            solve_inner(CellProblem(ig, "inner", np.array([1.0]), 32, frozen_y=[0.0]))


class TestCellProblem:
    def test_inner_needs_frozen_y(self, laminate):
        with pytest.raises(ContractError):
            CellProblem(laminate, "inner", np.array([1.0]), 32)

    def test_outer_needs_table(self, laminate):
        with pytest.raises(ContractError):
            CellProblem(laminate, "outer", np.array([1.0]), 32)

    def test_xi_size(self, laminate):
        with pytest.raises(ContractError):
            CellProblem(laminate, "inner", np.ones(2), 32, frozen_y=[0.0])

    def test_solver_level_mismatch(self, laminate, quadratic_table):
        cp = CellProblem(laminate, "outer", np.array([1.0]), 32, table=quadratic_table)
        with pytest.raises(ContractError):
            solve_inner(cp)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


class TestHomTable:
    """Interpolation, range handling and persistence of tabulated densities."""

    def test_hermite_interpolation_reproduces_quadratics(self, quadratic_table):
        assert float(quadratic_table.energy(np.array([[0.3]]))) == pytest.approx(0.09)
        assert quadratic_table.flux_at(np.array([[0.3]])).item() == pytest.approx(0.6)

    def test_infinite_outside_the_hull(self, quadratic_table):
        assert float(quadratic_table.energy(np.array([[2.5]]))) == np.inf

    def test_eval_interp_is_multilinear(self, quadratic_table):
        assert eval_interp(quadratic_table, 0.0, 0.25) == pytest.approx(0.125)
        assert eval_interp(quadratic_table, 0.0, 1.5) == pytest.approx(2.25)

    def test_eval_interp_range(self, quadratic_table):
        with pytest.raises(TableRangeError):
            eval_interp(quadratic_table, 0.0, 3.0)

    def test_outside_margin(self, quadratic_table):
        assert quadratic_table.outside(np.array([[0.0]])) is None
        assert quadratic_table.outside(np.array([[1.8]])) == (0, "hi")
        assert quadratic_table.outside(np.array([[-1.9]])) == (0, "lo")

    def test_nearest_column_is_periodic(self):
        table = make_quadratic_table(level="inner")
        assert table.nearest_column(np.array([[0.45], [-0.45], [0.1]])).tolist() == [3, 0, 2]

    def test_save_and_load(self, tmp_path, quadratic_table):
        path = save_table(quadratic_table, tmp_path / "table")
        assert path.name == "table.json"
        loaded = load_table(tmp_path / "table")
        assert loaded.level == "outer"
        assert loaded.axes == quadratic_table.axes
        np.testing.assert_array_equal(loaded.values, quadratic_table.values)
        np.testing.assert_array_equal(loaded.flux, quadratic_table.flux)
        assert loaded.all_converged

    def test_flux_field_is_the_tabulated_array(self, quadratic_table):
        assert "flux" in [f.name for f in dataclasses.fields(HomTable)]
        assert isinstance(quadratic_table.flux, np.ndarray)
        assert quadratic_table.flux.shape == quadratic_table.values.shape + (1,)

    def test_load_missing(self, tmp_path):
        with pytest.raises(ReportIOError):
            load_table(tmp_path / "missing")

    def test_load_malformed_sidecar(self, tmp_path):
        (tmp_path / "bad.json").write_text('{"kind": "homtable"}')
        with pytest.raises(DataError):
            load_table(tmp_path / "bad")


class TestLattice:
    def test_extension_keeps_spacing(self):
        axis = LatticeAxis(lo=-2.0, hi=2.0, count=9)
        hi = axis.extended("hi")
        lo = axis.extended("lo")
        assert (hi.lo, hi.hi, hi.count) == (-2.0, 6.0, 17)
        assert (lo.lo, lo.hi, lo.count) == (-6.0, 2.0, 17)
        assert hi.spacing == axis.spacing

    def test_ordered_bounds(self):
        with pytest.raises(ValueError):
            LatticeAxis(lo=1.0, hi=1.0, count=3)

    def test_second_order_free_coordinates(self):
        ig = make_integrand("quadratic_laminate", order=2, dim=2)
        assert free_indices(ig) == [(0, 0, 0), (0, 0, 1), (0, 1, 1)]
        xi = coords_to_tensor(ig, np.array([1.0, 2.0, 3.0]))
        np.testing.assert_array_equal(xi, [[[1.0, 2.0], [2.0, 3.0]]])
        np.testing.assert_array_equal(tensor_to_coords(ig, xi), [1.0, 2.0, 3.0])


class TestTabulatedDensity:
    """Structural properties every tabulated f_hom inherits from f."""

    @pytest.fixture(scope="class")
    def p_laminate(self):
        return make_integrand("p_laminate", p=3)

    @pytest.fixture(scope="class")
    def p_table(self, p_laminate):
        return tabulate(p_laminate, LatticeAxis(lo=-2.0, hi=2.0, count=9), 4, 32)

    def test_entries_inside_the_growth_sandwich(self, p_laminate, p_table):
        growth = p_laminate.growth
        b = growth.nfunction(np.abs(p_table.nodes()[0]))
        assert np.all(p_table.values >= growth.c1 * b - 1e-8)
        assert np.all(p_table.values <= growth.c2 * (1.0 + b))

    def test_entries_are_midpoint_convex(self, p_table):
        v = p_table.values
        second = v[:, :-2] + v[:, 2:] - 2.0 * v[:, 1:-1]
        assert second.min() >= -1e-8

    def test_neighbouring_entries_are_lipschitz(self, p_table):
        bound = float(np.max(np.abs(p_table.flux)))
        steps = np.abs(np.diff(p_table.values, axis=1))
        assert steps.max() <= bound * p_table.axes[0].spacing + 1e-8

    def test_grid_refinement_stays_on_the_oracle(self, p_laminate):
        exact = inner_oracle(p_laminate, 0.0, 1.0)
        errors = []
        for n in (32, 64, 128):
            cp = CellProblem(p_laminate, "inner", np.array([1.0]), n, frozen_y=[0.0])
            errors.append(abs(solve_inner(cp).energy - exact))
        assert max(errors) < 1e-5 * exact
        assert errors[-1] <= errors[0] + 1e-9


class TestPeriodicOperator:
    def test_to_spectral_drops_the_checkerboard(self):
        n = 32
        y = cell_points(n)
        h = 1.0 / n
        # central D of sin(2 pi y) / sinc equals the exact derivative of sin(2 pi y)
        sinc = np.sin(2.0 * np.pi * h) / (2.0 * np.pi * h)
        checker = 0.3 * (-1.0) ** np.arange(n)
        field = (np.sin(2.0 * np.pi * y) / sinc + checker)[None, :, None]
        smooth = PeriodicOperator(n, 1, 1, 1).to_spectral(field)
        np.testing.assert_allclose(smooth[0, :, 0], np.sin(2.0 * np.pi * y), atol=1e-12)

    def test_to_spectral_keeps_spectral_fields(self):
        field = np.random.default_rng(0).standard_normal((2, 16, 1))
        op = PeriodicOperator(16, 1, 1, 1, "spectral")
        assert op.to_spectral(field) is field


# ---------------------------------------------------------------------------
# Outer problems
# ---------------------------------------------------------------------------


class TestSolveOuter:
    """Reiterated value of the laminate from a tabulated inner density."""

    @pytest.fixture(scope="class")
    def inner_table(self):
        return _laminate_table()

    @pytest.fixture(scope="class")
    def fine_table(self):
        # one column per node of a 32-point y grid
        return _laminate_table(y_samples=32)

    def test_tabulated_inner_values(self, inner_table):
        assert inner_table.level == "inner"
        assert inner_table.all_converged
        # f_hom(y, xi) = a1(y) xi^2 / 2
        expected = 0.5 * a1(inner_table.y_points) * 4.0
        np.testing.assert_allclose(inner_table.values[:, -1], expected, rtol=1e-6)

    def test_outer_matches_reiterated_oracle(self, laminate, inner_table):
        cp = CellProblem(laminate, "outer", np.array([1.0]), 64, table=inner_table)
        sol = solve_outer(cp)
        assert sol.converged
        assert sol.energy == pytest.approx(0.25, abs=1e-5)
        assert sol.corrector.cells is Cells.Y
        assert sol.table is inner_table

    def test_outer_extends_the_table(self, laminate, inner_table):
        cp = CellProblem(laminate, "outer", np.array([1.5]), 64, table=inner_table)
        sol = solve_outer(cp)
        assert sol.table.axes[0].hi == 6.0
        assert sol.energy == pytest.approx(0.25 * 2.25, abs=1e-4)

    def test_outer_table(self, laminate, inner_table):
        outer = tabulate_outer(inner_table, laminate, LatticeAxis(lo=0.5, hi=1.0, count=3), 64)
        assert outer.level == "outer"
        np.testing.assert_allclose(outer.values[0], 0.25 * outer.nodes()[0] ** 2, atol=1e-5)

    def test_reiterated_correctors(self, laminate, inner_table):
        pair = reiterated_correctors(laminate, np.array([1.0]), inner_table, 16, 16)
        assert pair.energy == pytest.approx(0.25, abs=1e-5)
        assert pair.phi.cells is Cells.Y
        assert pair.psi.cells is Cells.YZ
        assert pair.psi.values.shape == (16, 16, 1)
        assert pair.converged

    def test_reiterated_correctors_in_parallel(self, laminate, inner_table):
        serial = reiterated_correctors(laminate, np.array([1.0]), inner_table, 16, 16)
        parallel = reiterated_correctors(laminate, np.array([1.0]), inner_table, 16, 16, jobs=2)
        assert parallel.energy == pytest.approx(serial.energy, abs=1e-12)
        np.testing.assert_allclose(parallel.phi.values, serial.phi.values, atol=1e-12)

    def test_slow_corrector_is_smooth(self, laminate, fine_table):
        pair = reiterated_correctors(laminate, np.array([1.0]), fine_table, 32, 32)
        # phi' = (2 + sin 2 pi y) / 2 - 1 for the quadratic laminate at xi = 1
        y = cell_points(32)
        expected = -np.cos(2.0 * np.pi * y) / (4.0 * np.pi)
        np.testing.assert_allclose(pair.phi.values[:, 0], expected, atol=1e-3)

    def test_recovery_energy_reaches_the_reiterated_limit(self, laminate, fine_table):
        pair = reiterated_correctors(laminate, np.array([1.0]), fine_table, 32, 32)
        eps = 2.0**-6
        grid = make_grid(eps, res_per_period=8)
        values = build_recovery_s1(lambda x: x[..., 0], pair.phi, pair.psi, eps, grid)
        assert energy_of(laminate, grid, eps, values) == pytest.approx(0.25, rel=0.02)

    def test_recovery_gradient_defect_shrinks_with_eps(self, laminate, fine_table):
        pair = reiterated_correctors(laminate, np.array([1.0]), fine_table, 32, 32)
        defects = [
            recovery_report(
                lambda x: x[..., 0], pair.phi, pair.psi, eps, make_grid(eps)
            ).gradient_defect
            for eps in (2.0**-2, 2.0**-3, 2.0**-4)
        ]
        assert defects[0] > defects[1] > defects[2]
        assert defects[-1] < 0.1
