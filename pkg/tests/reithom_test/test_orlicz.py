"""Unit tests for N-functions, conjugates, Delta_2 and Luxemburg norms."""

import numpy as np
import pytest

from reithom.errors import (
    ConfigError,
    ContractError,
    DataError,
    DomainError,
    UnboundedConjugateError,
)
from reithom.fields.periodic import Cells, PeriodicField
from reithom.orlicz import (
    LuxemburgNormRequest,
    check_nfunction,
    conjugate,
    conjugate_nfunction,
    delta2_check,
    eval_pair,
    holder_check,
    luxemburg_norm,
    modular,
    nfunction_from_spec,
    validate_nfunction,
)
from reithom.orlicz.catalog import power
from reithom.orlicz.nfunction import NFunction

# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


class TestCatalog:
    """Parsing of power:p, plog:p,q and exp."""

    def test_power_values(self):
        nf = nfunction_from_spec("power:3")
        assert nf.label == "power:3"
        assert eval_pair(nf, 2.0) == pytest.approx((8.0 / 3.0, 4.0))

    def test_plog_without_log_is_a_power(self):
        nf = nfunction_from_spec("plog:2,0")
        assert float(nf(3.0)) == pytest.approx(9.0)
        assert float(nf.b(3.0)) == pytest.approx(6.0)

    def test_plog_density_matches_derivative(self):
        nf = nfunction_from_spec("plog:2,1")
        t, h = 1.5, 1e-6
        fd = (float(nf(t + h)) - float(nf(t - h))) / (2 * h)
        assert float(nf.b(t)) == pytest.approx(fd, rel=1e-7)

    def test_exp(self):
        nf = nfunction_from_spec("exp")
        assert float(nf(1.0)) == pytest.approx(np.e - 2.0)

    @pytest.mark.parametrize("spec", ["power:1", "plog:1,0", "plog:2", "exp:1", "cosh", "power:x"])
    def test_invalid_specs_raise_config_error(self, spec):
        with pytest.raises(ConfigError):
            nfunction_from_spec(spec)


class TestEvalPair:
    def test_negative_argument_is_a_domain_error(self):
        with pytest.raises(DomainError):
            eval_pair(power(2.0), -1.0)

    def test_nan_argument_is_a_domain_error(self):
        with pytest.raises(DomainError):
            eval_pair(power(2.0), float("nan"))

    def test_finite_difference_density_fallback(self):
        nf = NFunction(label="square", eval=lambda t: t**2)
        assert float(nf.b(2.0)) == pytest.approx(4.0, rel=1e-6)


# ---------------------------------------------------------------------------
# Conjugates
# ---------------------------------------------------------------------------


class TestConjugate:
    """Numerical complementary functions."""

    def test_power_two_is_self_conjugate(self):
        assert conjugate(power(2.0), 3.0) == pytest.approx(4.5, rel=1e-10)

    def test_matches_closed_form_power_conjugate(self):
        nf = power(3.0)
        q = 1.5
        assert conjugate(nf, 2.0) == pytest.approx(2.0**q / q, rel=1e-9)

    def test_zero_maps_to_zero(self):
        assert conjugate(power(3.0), 0.0) == 0.0

    def test_rejects_negative_argument(self):
        with pytest.raises(DomainError):
            conjugate(power(2.0), -0.5)

    def test_rejects_nonpositive_tolerance(self):
        with pytest.raises(ContractError):
            conjugate(power(2.0), 1.0, tol=0.0)

    def test_bounded_density_has_unbounded_conjugate(self):
        # b(s) = 1 - e^{-s} never reaches 2
        nf = NFunction(
            label="bounded",
            eval=lambda t: t + np.expm1(-t),
            density=lambda t: -np.expm1(-t),
        )
        with pytest.raises(UnboundedConjugateError):
            conjugate(nf, 2.0)

    def test_double_conjugate_reproduces_plog(self):
        nf = nfunction_from_spec("plog:2,1")
        twice = conjugate_nfunction(conjugate_nfunction(nf))
        for t in (0.1, 1.0, 10.0):
            assert float(twice(t)) == pytest.approx(float(nf(t)), rel=1e-6)

    def test_numeric_conjugate_of_plog_satisfies_young_equality(self):
        nf = nfunction_from_spec("plog:2,1")
        conj = conjugate_nfunction(nf)
        t = 2.0
        bt = float(nf.b(t))
        assert float(nf(t)) + float(conj(bt)) == pytest.approx(t * bt, rel=1e-9)

    def test_closed_form_conjugate_is_used(self):
        conj = conjugate_nfunction(power(3.0))
        assert conj.label == "conj(power:3)"
        assert float(conj(2.0)) == pytest.approx(2.0**1.5 / 1.5)

    @pytest.mark.parametrize("spec", ["power:3", "plog:2,1"])
    def test_young_residual_is_nonnegative_and_vanishes_on_the_density(self, spec):
        nf = nfunction_from_spec(spec)
        conj = conjugate_nfunction(nf)
        s = np.geomspace(0.1, 10.0, 8)
        t = np.geomspace(0.1, 10.0, 8)
        residual = nf(s)[:, None] + conj(t)[None, :] - s[:, None] * t[None, :]
        assert residual.min() >= -1e-9
        on_density = nf(s) + conj(nf.b(s)) - s * nf.b(s)
        np.testing.assert_allclose(on_density, 0.0, atol=1e-9)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_numeric_double_conjugate_of_powers(self, p):
        closed = power(p)
        bare = NFunction(label=closed.label, eval=closed.eval, density=closed.density)
        once = conjugate_nfunction(bare)
        # stripped of the closed forms so both conjugations are numeric
        twice = conjugate_nfunction(
            NFunction(label=once.label, eval=once.eval, density=once.density)
        )
        t = np.geomspace(0.1, 10.0, 64)
        np.testing.assert_allclose(twice(t), closed(t), rtol=1e-6)


# ---------------------------------------------------------------------------
# Delta_2
# ---------------------------------------------------------------------------


class TestDelta2:
    def test_power_satisfies_delta2(self):
        report = delta2_check(power(3.0), 1e-2, 1e2)
        assert report.holds
        assert report.alpha == pytest.approx(8.0)
        assert report.t0 == 0.0
        assert report.heuristic

    def test_plog_satisfies_delta2(self):
        report = delta2_check(nfunction_from_spec("plog:3,0"), 1e-2, 1e2)
        assert report.holds
        assert report.alpha == pytest.approx(8.0)

    def test_exp_fails_delta2(self):
        report = delta2_check(nfunction_from_spec("exp"), 1e-2, 1e2)
        assert not report.holds
        assert report.alpha is None
        assert report.t_range == (1e-2, 1e2)

    @pytest.mark.parametrize("t_min,t_max", [(0.0, 1.0), (2.0, 1.0), (-1.0, 1.0)])
    def test_bad_ranges(self, t_min, t_max):
        with pytest.raises(ContractError):
            delta2_check(power(2.0), t_min, t_max)

    def test_too_few_samples(self):
        with pytest.raises(ContractError):
            delta2_check(power(2.0), 1e-2, 1e2, n_samples=8)


# ---------------------------------------------------------------------------
# Invariants and the check report
# ---------------------------------------------------------------------------


class TestValidateNFunction:
    @pytest.mark.parametrize("spec", ["power:2", "power:3", "plog:2,1", "exp"])
    def test_catalog_entries_pass(self, spec):
        report = validate_nfunction(nfunction_from_spec(spec))
        assert report.passed, [c for c in report.checks if not c.passed]

    def test_linear_function_is_not_superlinear(self):
        nf = NFunction(label="linear", eval=lambda t: 2.0 * t, density=lambda t: 2.0 + 0.0 * t)
        report = validate_nfunction(nf)
        assert not report.check("superlinear_at_zero").passed
        assert not report.check("superlinear_at_infinity").passed

    def test_concave_eval_fails_convexity_and_density(self):
        nf = NFunction(label="sqrt", eval=lambda t: np.sqrt(t), density=lambda t: t)
        report = validate_nfunction(nf)
        assert not report.check("midpoint_convex").passed
        assert not report.check("density_consistent").passed


class TestCheckNFunction:
    def test_power_report(self):
        report = check_nfunction(power(3.0))
        assert report.delta2.holds
        assert report.delta2_conjugate is not None and report.delta2_conjugate.holds
        assert report.suspects == []
        assert len(report.samples) == 16
        assert report.invariants.passed

    def test_exp_names_both_suspects(self):
        report = check_nfunction(nfunction_from_spec("exp"))
        assert not report.delta2.holds
        assert report.suspects == ["exp", "conj(exp)"]

    def test_samples_satisfy_young(self):
        report = check_nfunction(power(2.0))
        for s in report.samples:
            assert s.B + s.Bconj >= s.t * s.b * (1 - 1e-12) - 1e-12


# ---------------------------------------------------------------------------
# Modular and Luxemburg norm
# ---------------------------------------------------------------------------


def _cos_field(resolution: int = 64) -> PeriodicField:
    return PeriodicField.from_function(
        lambda p: np.cos(2 * np.pi * p[..., 0]), Cells.Z, resolution
    )


class TestLuxemburg:
    def test_modular_of_ones(self):
        assert modular(np.ones(10), power(2.0)) == pytest.approx(0.5)

    def test_modular_scales_with_measure_and_k(self):
        assert modular(np.ones(10), power(2.0), measure=2.0, k=2.0) == pytest.approx(0.25)

    def test_cos_under_square(self):
        nf = nfunction_from_spec("plog:2,0")
        norm = luxemburg_norm(LuxemburgNormRequest(_cos_field(), nf))
        assert norm == pytest.approx(np.sqrt(0.5), abs=1e-8)

    def test_cos_under_half_square(self):
        norm = luxemburg_norm(LuxemburgNormRequest(_cos_field(), power(2.0)))
        assert norm == pytest.approx(0.5, abs=1e-8)

    def test_raw_array_samples(self):
        values = np.full(32, 3.0)
        norm = luxemburg_norm(LuxemburgNormRequest(values, nfunction_from_spec("plog:2,0")))
        assert norm == pytest.approx(3.0, abs=1e-8)

    def test_zero_field_has_zero_norm(self):
        assert luxemburg_norm(LuxemburgNormRequest(np.zeros(8), power(2.0))) == 0.0

    def test_norm_is_homogeneous(self):
        nf = nfunction_from_spec("plog:2,1")
        values = np.linspace(-1.0, 2.0, 50)
        one = luxemburg_norm(LuxemburgNormRequest(values, nf))
        three = luxemburg_norm(LuxemburgNormRequest(3.0 * values, nf))
        assert three == pytest.approx(3.0 * one, rel=1e-8)

    def test_rejects_nonfinite_values(self):
        with pytest.raises(DataError):
            luxemburg_norm(LuxemburgNormRequest(np.array([1.0, np.inf]), power(2.0)))

    def test_rejects_nonpositive_measure(self):
        with pytest.raises(ContractError):
            luxemburg_norm(LuxemburgNormRequest(np.ones(4), power(2.0), domain_measure=0.0))

    @pytest.mark.parametrize("spec", ["power:3", "plog:2,1"])
    @pytest.mark.parametrize("scale", [0.3, 4.0])
    def test_norm_and_modular_bracket_each_other(self, spec, scale):
        nf = nfunction_from_spec(spec)
        values = scale * _cos_field().values
        norm = luxemburg_norm(LuxemburgNormRequest(values, nf))
        value = modular(values, nf)
        if norm <= 1.0:
            assert value <= norm * (1 + 1e-9)
        else:
            assert norm <= value * (1 + 1e-9)

    def test_small_and_large_fields_land_on_both_sides(self):
        nf = nfunction_from_spec("plog:2,1")
        assert luxemburg_norm(LuxemburgNormRequest(0.3 * _cos_field().values, nf)) < 1.0
        assert luxemburg_norm(LuxemburgNormRequest(4.0 * _cos_field().values, nf)) > 1.0


class TestHolder:
    """``|int u v| <= 2 |u|_B |v|_B~`` on sampled pairs."""

    @pytest.mark.parametrize("spec", ["power:2", "power:3", "plog:2,1"])
    def test_holds_for_catalog_entries(self, spec):
        check = holder_check(nfunction_from_spec(spec))
        assert check.name == "holder_inequality"
        assert check.passed
        assert 0.0 < check.worst <= 1.0

    @pytest.mark.parametrize("spec", ["power:3", "plog:2,1"])
    def test_sampled_pairs(self, spec):
        nf = nfunction_from_spec(spec)
        conj = conjugate_nfunction(nf)
        rng = np.random.default_rng(7)
        for _ in range(3):
            u, v = rng.uniform(-3.0, 3.0, 40), rng.uniform(-3.0, 3.0, 40)
            lhs = abs(float(np.mean(u * v)))
            rhs = luxemburg_norm(LuxemburgNormRequest(u, nf)) * luxemburg_norm(
                LuxemburgNormRequest(v, conj)
            )
            assert lhs <= 2.0 * rhs

    def test_check_report_carries_the_holder_row(self):
        report = check_nfunction(power(3.0))
        assert report.invariants.check("holder_inequality").passed
