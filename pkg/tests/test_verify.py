"""Discrete operators and the equation-certification engine."""

import math

import numpy as np
import pytest

from tcpp.errors import DomainError, GridTooCoarseError, UnknownEquationError
from tcpp.specfun import TimeSeries
from tcpp.timechange import poisson_pmf
from tcpp.verify.operators import (
    central_difference,
    convergence_order,
    estimate_order,
    fd_derivative,
    shift_power,
)
from tcpp.verify.registry import check_equation, registry_ids
from tcpp.verify.report import GridSpec, LevelResidual, ResidualReport


class TestShiftPower:
    def test_identity(self):
        v = np.array([0.2, 0.5, 0.3])
        assert np.array_equal(shift_power(v, 0), v)

    def test_first_difference(self):
        v = np.array([1.0, 4.0, 9.0])
        out = shift_power(v, 1)
        assert np.allclose(out, [1.0, 3.0, 5.0])

    def test_second_difference_matches_poisson_second_derivative(self):
        # lam^2 (1-shift)^2 p_k(x) = p_k''(x)
        lam, x = 1.4, 2.3
        p = np.array([poisson_pmf(k, x, lam) for k in range(8)])
        lhs = lam * lam * shift_power(p, 2)
        rhs = np.array([poisson_pmf(k, x, lam, order=2) for k in range(8)])
        assert np.allclose(lhs, rhs, atol=1e-14)

    def test_binomial_expansion(self):
        v = np.arange(6, dtype=float) ** 2
        out = shift_power(v, 3)
        # (1-shift)^3 v_k = v_k - 3 v_{k-1} + 3 v_{k-2} - v_{k-3}
        assert out[4] == pytest.approx(16.0 - 3 * 9.0 + 3 * 4.0 - 1.0)

    def test_2d_axis(self):
        v = np.arange(12, dtype=float).reshape(4, 3)
        out = shift_power(v, 1, axis=0)
        assert np.allclose(out[1:], v[1:] - v[:-1])
        assert np.allclose(out[0], v[0])

    def test_negative_j(self):
        with pytest.raises(DomainError):
            shift_power(np.ones(3), -1)


class TestFdDerivative:
    def test_quadratic_first_derivative(self):
        t = np.linspace(1.0, 5.0, 33)
        d = fd_derivative(TimeSeries(t, t ** 2), 1, richardson=False)
        i = np.argmin(np.abs(d.times - 3.0))
        assert d.values[i] == pytest.approx(2.0 * d.times[i], abs=1e-10)

    def test_exponential_second_derivative(self):
        a = 1.0 - math.sqrt(3.0)
        t = np.linspace(0.5, 2.0, 129)
        d = fd_derivative(TimeSeries(t, np.exp(a * t)), 2, richardson=True)
        assert np.max(np.abs(d.values - a * a * np.exp(a * d.times))) < 1e-9

    def test_fourth_derivative_of_sin(self):
        # h near the truncation/roundoff optimum eps^(1/8) ~ 1e-2: smaller
        # steps lose to eps/h^4 roundoff amplification
        t = np.linspace(0.5, 1.5, 101)
        d = fd_derivative(TimeSeries(t, np.sin(t)), 4, richardson=True)
        i = np.argmin(np.abs(d.times - 1.0))
        assert d.values[i] == pytest.approx(math.sin(d.times[i]), abs=1e-6)

    def test_richardson_gains_two_orders(self):
        errs_raw, errs_rich = [], []
        for n in (33, 65, 129):
            t = np.linspace(1.0, 2.0, n)
            y = np.exp(t)
            h = t[1] - t[0]
            raw, m = central_difference(y, h, 1, richardson=False)
            rich, mr = central_difference(y, h, 1, richardson=True)
            errs_raw.append(np.max(np.abs(raw - np.exp(t[m:-m]))))
            errs_rich.append(np.max(np.abs(rich - np.exp(t[mr:-mr]))))
        order_raw = np.polyfit(np.log([1 / 32, 1 / 64, 1 / 128]), np.log(errs_raw), 1)[0]
        order_rich = np.polyfit(np.log([1 / 32, 1 / 64, 1 / 128]), np.log(errs_rich), 1)[0]
        assert order_raw == pytest.approx(2.0, abs=0.2)
        assert order_rich == pytest.approx(4.0, abs=0.3)

    def test_too_coarse(self):
        t = np.linspace(1.0, 2.0, 5)
        with pytest.raises(GridTooCoarseError):
            fd_derivative(TimeSeries(t, t), 4, richardson=True)


class TestConvergenceOrder:
    def _report(self, hs, res):
        est = estimate_order(hs, res)
        return ResidualReport(
            equation_id="x", params={}, levels=[LevelResidual(h, r, r) for h, r in zip(hs, res)],
            estimated_order=est.order, floor_limited=est.floor_limited,
            passed=True, band=(1, 3),
        )

    def test_exact_geometric_sequence(self):
        rep = self._report([0.1, 0.05, 0.025], [1e-2, 2.5e-3, 6.25e-4])
        assert convergence_order(rep) == pytest.approx(2.0, abs=1e-10)

    def test_floor_limited_flagged(self):
        rep = self._report([0.1, 0.05, 0.025], [1e-11, 9e-12, 1.1e-11])
        assert rep.floor_limited
        assert math.isnan(convergence_order(rep))

    def test_needs_three_levels(self):
        rep = self._report([0.1, 0.05, 0.025], [1e-2, 2.5e-3, 6.25e-4])
        rep.levels = rep.levels[:2]
        with pytest.raises(DomainError):
            convergence_order(rep)


class TestGridSpec:
    def test_level_times_dyadic(self):
        g = GridSpec(0.5, 2.0, points=9, refinement_levels=3)
        t0 = g.level_times(0)
        t2 = g.level_times(2)
        assert t0.size == 9 and t2.size == 33
        assert np.allclose(t2[::4], t0)

    def test_validation(self):
        with pytest.raises(DomainError):
            GridSpec(0.0, 1.0)
        with pytest.raises(DomainError):
            GridSpec(0.5, 2.0, points=4)
        with pytest.raises(DomainError):
            GridSpec(0.5, 2.0, refinement_levels=9)


class TestCheckEquation:
    def test_unknown_equation(self):
        with pytest.raises(UnknownEquationError):
            check_equation("prop9.9")

    def test_registry_has_fourteen_families(self):
        families = {eq.split("(")[0] for eq in registry_ids()}
        assert families == {
            "prop2.1", "prop2.2", "ig-density-pde", "prop3.1", "deblassie",
            "thm3.1", "cor3.1", "frac-dde", "et-pde", "prop3.2", "prop4.1",
            "rmk4.1", "inv-tempered-pde", "prop4.2",
        }
        assert len(families) == 14

    def test_report_structure(self):
        rep = check_equation("prop2.1")
        d = rep.to_dict()
        assert d["equation_id"] == "prop2.1"
        assert {"h", "max_residual", "l2_residual"} <= set(d["levels"][0])
        assert len(d["levels"]) == 4
        assert {"estimated_order", "pass", "floor_limited"} <= set(d)

    def test_prop21_k0_exact_identity(self):
        # a(a - 2 d g) = 2 d^2 lam for a = d g - d sqrt(g^2 + 2 lam): the k=0
        # closed form satisfies the DDE exactly, so every level is tiny
        rep = check_equation("prop2.1", k_range=(0,))
        assert all(lv.max_residual <= 1e-8 for lv in rep.levels)
        assert rep.passed

    def test_ig_density_pde_order_two(self):
        rep = check_equation("ig-density-pde")
        assert rep.passed
        assert 1.7 <= rep.estimated_order <= 2.3

    def test_frac_dde_half_order(self):
        rep = check_equation("frac-dde(1/2)")
        assert rep.passed
        assert rep.estimated_order >= 1.4

    def test_et_pde_boundary_system(self):
        rep = check_equation("et-pde(2)")
        assert rep.passed
        assert rep.extras["boundary_value_max_error"] <= 1e-6
        assert rep.extras["boundary_derivative_max_abs"] <= 1e-3
        assert rep.extras["far_field_max"] <= 1e-12

    def test_prop32_rejects_alternative_exponent(self):
        # the statement's (1-shift)^(2^n) fits; the proof's final-line
        # (1-shift)^(2^n - 1) variant leaves an O(1) residual
        rep = check_equation("prop3.2")
        assert rep.passed
        assert rep.extras["alternative_shift_exponent_max_residual"] > 100 * rep.finest_residual

    def test_param_override(self):
        rep = check_equation("prop2.1", params={"lam": 2.0})
        assert rep.params["lam"] == 2.0
        assert rep.passed

    def test_grid_override(self):
        g = GridSpec(0.6, 1.8, points=33, refinement_levels=3)
        rep = check_equation("ig-density-pde", grid=g)
        assert len(rep.levels) == 3
        assert rep.passed

    def test_relative_residual_within_scale(self):
        for eq in ("prop3.1(1)", "rmk4.1(2)"):
            rep = check_equation(eq)
            assert rep.finest_residual <= 1e-3 * rep.scale

    def test_thm31_source_bookkeeping(self):
        # the j = 1 source weights are exactly p'_k(0) = (-lam, lam, 0, ...)
        from tcpp.verify.registry import _shift_at_zero

        lam = 1.7
        got = _shift_at_zero(1, np.arange(5), lam)
        assert np.allclose(got, [-lam, lam, 0.0, 0.0, 0.0])
        # j = 2: lam^2 (1, -2, 1, 0, ...)
        got2 = _shift_at_zero(2, np.arange(5), lam)
        assert np.allclose(got2, [lam ** 2, -2 * lam ** 2, lam ** 2, 0.0, 0.0])

    def test_rmk41_mu_to_zero_matches_prop31_structure(self):
        # as mu -> 0 the tempered operator collapses onto the iterated-stable
        # DDE; the residual structure must line up within 1e-3
        grid = GridSpec(0.5, 2.5, points=17, refinement_levels=3)
        a = check_equation("rmk4.1(2)", params={"mu": 1e-6}, grid=grid)
        b = check_equation("prop3.1(1)", grid=grid)
        assert a.passed
        assert abs(a.finest_residual - b.finest_residual) <= 1e-3
