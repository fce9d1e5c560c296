"""Pmf, moment, and waiting-time computations for time-changed counts."""

import math

import numpy as np
import pytest
from scipy.special import erfc

from tcpp.errors import DomainError, NoDensityError
from tcpp.specfun import mittag_leffler
from tcpp.subordinators.spec import (
    Composition,
    InverseGaussian,
    InverseOf,
    Stable,
    TemperedStable,
)
from tcpp.timechange import (
    PmfTable,
    PoissonParams,
    fractional_poisson_pmf,
    moments_ig,
    pmf_bessel_ig,
    pmf_monte_carlo,
    pmf_quadrature,
    pmf_table,
    poisson_pmf,
    waiting_time_lt,
    waiting_time_survival,
)


class TestPoissonPmf:
    def test_initial_conditions(self):
        assert poisson_pmf(0, 0.0, 1.0) == 1.0
        for k in (1, 2, 5):
            assert poisson_pmf(k, 0.0, 1.0) == 0.0

    def test_direct_value(self):
        assert poisson_pmf(3, 2.0, 1.0) == pytest.approx(
            math.exp(-2.0) * 8.0 / 6.0, rel=1e-14
        )

    def test_derivative_at_zero(self):
        lam = 1.7
        assert poisson_pmf(0, 0.0, lam, order=1) == pytest.approx(-lam)
        assert poisson_pmf(1, 0.0, lam, order=1) == pytest.approx(lam)
        assert poisson_pmf(2, 0.0, lam, order=1) == 0.0

    def test_derivatives_match_finite_differences(self):
        lam, x, h = 1.3, 2.0, 1e-5
        for k in (0, 1, 4):
            fd1 = (poisson_pmf(k, x + h, lam) - poisson_pmf(k, x - h, lam)) / (2 * h)
            assert poisson_pmf(k, x, lam, order=1) == pytest.approx(fd1, abs=1e-9)
            fd2 = (
                poisson_pmf(k, x + h, lam)
                - 2 * poisson_pmf(k, x, lam)
                + poisson_pmf(k, x - h, lam)
            ) / (h * h)
            assert poisson_pmf(k, x, lam, order=2) == pytest.approx(fd2, abs=1e-6)

    def test_poisson_params_validation(self):
        with pytest.raises(DomainError):
            PoissonParams(0.0)


class TestBesselPmf:
    def test_k0_laplace_anchor(self):
        got = pmf_bessel_ig(0, 1.0, 1.0, 1.0, 1.0)
        assert got == pytest.approx(math.exp(1.0 - math.sqrt(3.0)), abs=1e-12)

    def test_sum_with_tail_is_one(self):
        # the k <= 60 partial sum misses exactly the true tail mass (~1e-7
        # at these parameters); the identity holds once the tail is added
        s = sum(pmf_bessel_ig(k, 2.0, 2.0, 1.0, 1.0) for k in range(61))
        tail = pmf_table(2.0, 2.0, InverseGaussian(1.0, 1.0), kmax=60).tail_bound
        assert s + tail == pytest.approx(1.0, abs=1e-9)
        s200 = sum(pmf_bessel_ig(k, 2.0, 2.0, 1.0, 1.0) for k in range(201))
        assert s200 == pytest.approx(1.0, abs=1e-9)

    def test_matches_quadrature(self):
        for k in range(0, 31, 3):
            b = pmf_bessel_ig(k, 1.0, 1.0, 1.0, 1.0)
            q = pmf_quadrature(k, 1.0, 1.0, InverseGaussian(1.0, 1.0))
            assert abs(b - q) <= 1e-8

    def test_gamma_zero_rejected(self):
        with pytest.raises(DomainError):
            pmf_bessel_ig(0, 1.0, 1.0, 1.0, 0.0)

    def test_large_k_no_overflow(self):
        assert pmf_bessel_ig(400, 1.0, 1.0, 1.0, 1.0) >= 0.0


class TestQuadraturePmf:
    def test_small_t_degenerates(self):
        assert pmf_quadrature(0, 1e-3, 1.0, InverseGaussian(1.0, 1.0)) == pytest.approx(
            1.0, abs=1e-3
        )
        assert pmf_quadrature(1, 1e-3, 1.0, InverseGaussian(1.0, 1.0)) < 2e-3

    def test_inverse_stable_k0_erfc(self):
        got = pmf_quadrature(0, 1.0, 1.0, InverseOf(Stable(0.5)))
        assert got == pytest.approx(math.e * erfc(1.0), abs=1e-10)

    def test_no_density_error(self):
        spec = InverseOf(Composition((Stable(0.5), TemperedStable(0.5, 1.0))))
        with pytest.raises(NoDensityError):
            pmf_quadrature(0, 1.0, 1.0, spec)

    def test_table_normalization_all_kinds(self):
        specs = [
            InverseGaussian(1.0, 1.0),
            InverseGaussian(1.0, 0.0),
            Stable(0.5),
            TemperedStable(0.5, 1.0),
            InverseOf(Stable(0.5)),
            InverseOf(Stable(0.25)),
            InverseOf(InverseGaussian(1.0, 1.0)),
            InverseOf(TemperedStable(0.5, 1.0)),
            Composition((Stable(0.5), Stable(0.5))),
        ]
        for spec in specs:
            table = pmf_table(1.0, 1.0, spec, kmax=32)
            assert abs(table.normalization_defect) <= 1e-6, spec.label()
            assert np.all(table.values >= 0)

    def test_tail_decay_beyond_mean(self):
        table = pmf_table(1.0, 2.0, InverseGaussian(1.0, 1.0), kmax=40)
        mean = 2.0  # lam delta t / gamma
        past = table.values[int(mean) + 2 :]
        assert np.all(np.diff(past) < 0)


class TestMonteCarloPmf:
    def test_within_4se_of_bessel(self):
        table = pmf_monte_carlo(1.0, 1.0, InverseGaussian(1.0, 1.0), 100_000, seed=77)
        n = 100_000
        for k in range(0, min(table.kmax, 12) + 1):
            p = pmf_bessel_ig(k, 1.0, 1.0, 1.0, 1.0)
            se = math.sqrt(p * (1 - p) / n)
            assert abs(table.values[k] - p) <= 4.0 * se

    def test_halving_count_stability(self):
        big = pmf_monte_carlo(1.0, 1.0, InverseGaussian(1.0, 1.0), 80_000, seed=5)
        small = pmf_monte_carlo(1.0, 1.0, InverseGaussian(1.0, 1.0), 40_000, seed=6)
        for k in range(5):
            se = math.sqrt(
                big.stderr[k] ** 2 + (small.stderr[k] if k <= small.kmax else 0.0) ** 2
            )
            assert abs(big.values[k] - small.values[k]) <= 5.0 * se + 1e-4

    def test_composition_matches_quadrature(self):
        spec = Composition((Stable(0.5), Stable(0.5)))
        table = pmf_monte_carlo(1.0, 1.0, spec, 100_000, seed=19)
        for k in range(4):
            q = pmf_quadrature(k, 1.0, 1.0, spec)  # index-1/4 stable density
            se = max(float(table.stderr[k]), 1e-6)
            assert abs(table.values[k] - q) <= 4.0 * se

    def test_count_floor(self):
        with pytest.raises(DomainError):
            pmf_monte_carlo(1.0, 1.0, Stable(0.5), 10, seed=1)


class TestFractionalPoisson:
    @pytest.mark.parametrize("beta", [0.25, 0.5])
    def test_k0_is_mittag_leffler(self, beta):
        got = fractional_poisson_pmf(0, 1.0, 1.0, beta)
        assert got == pytest.approx(mittag_leffler(beta, -1.0), abs=1e-9)

    def test_k0_half_erfc_form(self):
        got = fractional_poisson_pmf(0, 2.0, 1.5, 0.5)
        want = math.exp(1.5 ** 2 * 2.0) * erfc(1.5 * math.sqrt(2.0))
        assert got == pytest.approx(want, abs=1e-9)

    def test_beta_to_one_limit(self):
        for k in range(6):
            a = fractional_poisson_pmf(k, 1.0, 1.0, 0.999)
            assert a == pytest.approx(poisson_pmf(k, 1.0, 1.0), abs=1e-2)

    def test_normalization(self):
        total = sum(fractional_poisson_pmf(k, 1.0, 1.0, 0.5) for k in range(40))
        assert total == pytest.approx(1.0, abs=1e-7)


class TestMomentsIG:
    def test_closed_form_values(self):
        mean, var = moments_ig(3.0, 2.0, 1.0, 1.0)
        assert mean == pytest.approx(6.0, rel=1e-12)
        # Bessel form collapses to lam d t/g + lam^2 d t/g^3
        assert var == pytest.approx(6.0 + 4.0 * 3.0, rel=1e-10)

    def test_matches_pmf_summation(self):
        mean, var = moments_ig(1.0, 1.0, 1.0, 1.0)
        table = pmf_table(1.0, 1.0, InverseGaussian(1.0, 1.0), kmax=256)
        ks = np.arange(257, dtype=float)
        m1 = float(np.sum(ks * table.values))
        m2 = float(np.sum(ks * ks * table.values))
        assert abs(m1 - mean) <= 1e-6
        assert abs(m2 - m1 * m1 - var) <= 1e-6

    def test_overdispersion(self):
        for lam in (0.5, 2.0):
            for g in (0.5, 1.0, 2.0):
                mean, var = moments_ig(1.5, lam, 1.0, g)
                assert var >= mean

    def test_domain(self):
        with pytest.raises(DomainError):
            moments_ig(1.0, 1.0, 1.0, 0.0)


class TestWaitingTimes:
    def test_lt_closed_form(self):
        lam, delta, gamma, s = 1.0, 1.0, 1.0, 2.0
        want = lam / (lam + delta * (math.sqrt(gamma * gamma + 2 * s) - gamma))
        assert waiting_time_lt(s, lam, delta, gamma) == want

    def test_lt_tempered_ml_form(self):
        # delta = 1/sqrt(2): LT = lam/(lam + (s+a)^(1/2) - a^(1/2)), a = g^2/2
        lam, gamma, s = 1.3, 0.8, 1.7
        a = gamma * gamma / 2.0
        want = lam / (lam + math.sqrt(s + a) - math.sqrt(a))
        got = waiting_time_lt(s, lam, 1 / math.sqrt(2.0), gamma)
        assert got == pytest.approx(want, rel=1e-14)

    def test_lt_gamma_zero(self):
        for s in (0.3, 1.0, 4.0):
            got = waiting_time_lt(s, 1.0, 1 / math.sqrt(2.0), 0.0)
            assert got == pytest.approx(1.0 / (1.0 + math.sqrt(s)), rel=1e-14)

    def test_lt_small_s_limit(self):
        assert waiting_time_lt(1e-12, 1.0, 1.0, 1.0) == pytest.approx(1.0, abs=1e-6)

    def test_survival_vs_lt_consistency(self):
        # E e^{-s J}, with J's survival from quadrature, must match the closed
        # LT: s int_0^inf e^{-sx} P(J > x) dx = 1 - E e^{-sJ}
        from scipy.integrate import quad

        lam, delta, gamma, s = 1.0, 1.0, 1.0, 1.0
        integral = quad(
            lambda x: math.exp(-s * x) * waiting_time_survival(x, lam, delta, gamma),
            0, 50, limit=200,
        )[0]
        assert s * integral == pytest.approx(
            1.0 - waiting_time_lt(s, lam, delta, gamma), abs=1e-7
        )

    def test_survival_is_ml_at_gamma_zero(self):
        # P(J > x) = E e^{-lam H(x)} = E_{1/2}(-lam sqrt(x)) for the 1/2-stable clock
        lam = 1.0
        for x in (0.5, 1.0, 2.0):
            got = waiting_time_survival(x, lam, 1 / math.sqrt(2.0), 0.0)
            assert got == pytest.approx(
                mittag_leffler(0.5, -lam * math.sqrt(x)), abs=1e-7
            )


class TestPmfTableSerialization:
    def test_json_round_trip(self):
        table = pmf_table(1.0, 1.0, TemperedStable(0.5, 1.0), kmax=12)
        again = PmfTable.from_dict(table.to_dict())
        assert again.spec == table.spec
        assert np.allclose(again.values, table.values)
        assert again.tail_bound == table.tail_bound

    def test_csv_17_digits(self):
        table = pmf_table(1.0, 1.0, InverseGaussian(1.0, 1.0), kmax=4)
        rows = list(table.csv_rows())
        assert rows[0] == ["k", "value"]
        val = rows[1][1]
        # 17 significant digits, '.' decimal separator, round-trips exactly
        assert "," not in val
        assert len(val.replace("-", "").replace(".", "").replace("e", "").lstrip("0")) >= 15
        assert float(val) == table.values[0]

    def test_mc_stderr_column(self):
        table = pmf_monte_carlo(1.0, 1.0, InverseGaussian(1.0, 1.0), 2000, seed=3)
        rows = list(table.csv_rows())
        assert rows[0] == ["k", "value", "stderr"]

    def test_gross_normalization_violation_rejected(self):
        with pytest.raises(DomainError):
            PmfTable(
                spec=Stable(0.5), lam=1.0, t=1.0, kmax=1,
                values=np.array([0.3, 0.3]), tail_bound=0.0,
            )


class TestMixedPoissonIdentity:
    def test_two_sample_chi_square(self):
        # N(G(t)) with delta=1, gamma=0 equals N(lam t^2 Y), Y ~ 1/Z^2
        from scipy.stats import chi2

        from tcpp.subordinators.sampling import rng_stream, sample

        lam, t, n = 1.0, 2.0, 100_000
        g = sample(InverseGaussian(1.0, 0.0), t, n, seed=404).values
        rng = rng_stream(404, 1)
        n1 = rng.poisson(np.minimum(lam * g, 1e12))
        rng2 = rng_stream(405, 0)
        y = 1.0 / rng2.standard_normal(n) ** 2
        n2 = rng_stream(405, 1).poisson(np.minimum(lam * t * t * y, 1e12))
        bins = np.arange(0, 32)
        c1 = np.bincount(np.minimum(n1, 31), minlength=32).astype(float)
        c2 = np.bincount(np.minimum(n2, 31), minlength=32).astype(float)
        keep = (c1 + c2) > 0
        stat = float(np.sum((c1[keep] - c2[keep]) ** 2 / (c1[keep] + c2[keep])))
        p = float(chi2.sf(stat, np.count_nonzero(keep) - 1))
        assert p > 0.001
