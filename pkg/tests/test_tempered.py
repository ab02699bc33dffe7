import math

import numpy as np
import pytest
from scipy.integrate import quad

import subdens as sd
from subdens import DomainError, StableParams, TemperedParams
from subdens.specfun import sinpi

from conftest import total_mass


def tilted_series_direct(alpha, lam, t, x, kmax=400):
    """The tempered-density proposition coded as printed (modulo the known
    global sign of the embedded stable series): an independent evaluation
    path used only by this test."""
    tot = 0.0
    lx = math.log(x)
    for k in range(1, kmax):
        s = sinpi(alpha * k)
        if s == 0.0:
            continue
        lg = (math.lgamma(1 + k * alpha) - math.lgamma(k + 1.0)
              - (1 + alpha * k) * lx + k * math.log(t))
        tot += (-1.0) ** (k - 1) * s * math.exp(lg) / math.pi
    return math.exp(-lam * x + lam ** alpha * t) * tot


class TestTemperedPdf:
    def test_lambda_zero_is_stable_exactly(self):
        p = TemperedParams(0.6, 0.0, 1.0)
        q = StableParams(0.6, 1.0)
        for x in (0.5, 1.0, 3.0):
            assert sd.tempered_pdf(p, x).value == sd.stable_pdf(q, x).value

    def test_half_alpha_tilted_closed_form(self):
        # lam^alpha*t = 1 and lam*x = 1 cancel at alpha=1/2, lam=1, t=1, x=1
        p = TemperedParams(0.5, 1.0, 1.0)
        assert sd.tempered_pdf(p, 1.0).value == pytest.approx(
            math.exp(-0.25) / (2 * math.sqrt(math.pi)), rel=1e-12)

    def test_identity_structure(self):
        p = TemperedParams(0.7, 0.8, 1.3)
        for x in (0.4, 1.1, 2.7):
            tilt = math.exp(-p.lam * x + p.lam ** p.alpha * p.t)
            assert sd.tempered_pdf(p, x).value == pytest.approx(
                tilt * sd.stable_pdf(p.stable, x).value, rel=1e-14)

    def test_equivalence_with_proposition_series(self):
        # the proposition's own series (independent coding) within 1e-8
        for alpha, lam, t in ((0.5, 1.0, 1.0), (0.7, 0.5, 2.0), (0.3, 2.0, 0.7)):
            p = TemperedParams(alpha, lam, t)
            for x in (0.8, 1.5, 4.0):
                direct = tilted_series_direct(alpha, lam, t, x)
                assert sd.tempered_pdf(p, x).value == pytest.approx(
                    direct, rel=1e-8)

    @pytest.mark.parametrize("alpha,lam,t", [(0.3, 0.5, 1.0), (0.6, 2.0, 1.0),
                                             (0.9, 0.5, 1.0), (0.5, 1.0, 2.0)])
    def test_normalization(self, alpha, lam, t):
        mass = total_mass(
            lambda xs: sd.tempered_pdf_grid(TemperedParams(alpha, lam, t), xs))
        assert mass == pytest.approx(1.0, abs=1e-6)


class TestInvTemperedPdf:
    def test_against_laplace_inversion_frozen(self):
        # mpmath.invertlaplace of (1/u)((u+1)^0.6-1)exp(-0.8((u+1)^0.6-1))
        p1 = TemperedParams(0.6, 1.0, 1.0)
        assert sd.inv_tempered_pdf(p1, 0.8).value == pytest.approx(
            0.2063789310916358207533864, rel=1e-11)
        p2 = TemperedParams(0.6, 1.0, 2.0)
        assert sd.inv_tempered_pdf(p2, 0.8).value == pytest.approx(
            0.034074247420643416583447, rel=1e-11)

    def test_published_t_power_fails_oracle(self):
        # the printed double series carries t^{-a(k+1)} on both inner sums;
        # at t=2 that evaluates to ~0.369, an order off the Laplace oracle,
        # while the re-derived t^{-a k} second term matches it
        alpha, lam, t, x = 0.6, 1.0, 2.0, 0.8
        from subdens.specfun import reciprocal_gamma
        tot = 0.0
        for k in range(120):
            A = sum((lam * t) ** m * reciprocal_gamma(m + 1 - alpha * (k + 1))
                    for m in range(80))
            B = sum((lam * t) ** m * reciprocal_gamma(m + 1 - alpha * k)
                    for m in range(80))
            tot += ((-x) ** k / math.factorial(k) * t ** (-alpha * (k + 1))
                    * (A - lam ** alpha * B))
        printed = math.exp(-lam * t + lam ** alpha * x) * tot
        oracle = 0.034074247420643416583447
        assert abs(printed - oracle) / oracle > 5.0   # order-of-magnitude off
        assert sd.inv_tempered_pdf(
            TemperedParams(alpha, lam, t), x).value == pytest.approx(oracle,
                                                                     rel=1e-11)

    def test_lambda_zero_delegates(self):
        p = TemperedParams(0.5, 0.0, 1.0)
        q = StableParams(0.5, 1.0)
        assert (sd.inv_tempered_pdf(p, 1.0).value
                == sd.inv_stable_pdf(q, 1.0).value)

    def test_lambda_continuity(self):
        p = TemperedParams(0.5, 1e-12, 1.0)
        q = StableParams(0.5, 1.0)
        for x in np.linspace(0.1, 5.0, 9):
            assert sd.inv_tempered_pdf(p, float(x)).value == pytest.approx(
                sd.inv_stable_pdf(q, float(x)).value, rel=1e-6)

    def test_value_at_zero_is_limit(self):
        p = TemperedParams(0.6, 1.0, 1.0)
        assert sd.inv_tempered_pdf(p, 0.0).value == pytest.approx(
            sd.inv_tempered_limit0(p), rel=1e-14)

    @pytest.mark.parametrize("alpha,lam,t", [(0.5, 1.0, 1.0), (0.7, 0.5, 1.0)])
    def test_normalization(self, alpha, lam, t):
        mass = total_mass(
            lambda xs: sd.inv_tempered_pdf_grid(TemperedParams(alpha, lam, t), xs),
            hi=1e6)
        assert mass == pytest.approx(1.0, abs=1e-5)

    def test_negative_x_rejected(self):
        with pytest.raises(DomainError):
            sd.inv_tempered_pdf(TemperedParams(0.5, 1.0, 1.0), -0.5)


class TestInvTemperedLimit0:
    def test_lambda_zero(self):
        assert sd.inv_tempered_limit0(TemperedParams(0.5, 0.0, 1.0)) == (
            pytest.approx(1 / math.sqrt(math.pi), rel=1e-14))
        assert sd.inv_tempered_limit0(TemperedParams(0.5, 0.0, 4.0)) == (
            pytest.approx(0.28209479177, rel=1e-10))

    def test_matches_series_at_tiny_x(self):
        for alpha, lam, t in ((0.5, 1.0, 1.0), (0.6, 1.0, 2.0), (0.8, 0.3, 0.7)):
            p = TemperedParams(alpha, lam, t)
            lim = sd.inv_tempered_limit0(p)
            assert sd.inv_tempered_pdf(p, 1e-10).value == pytest.approx(
                lim, rel=1e-6)


class TestTail:
    def test_lambda_zero_against_closed_form(self):
        # P(D_{1/2}(1) > x) = erf(1/(2 sqrt(x))) exactly
        p = TemperedParams(0.5, 0.0, 1.0)
        for x in (10.0, 100.0, 1000.0):
            assert sd.tempered_tail(p, x) == pytest.approx(
                math.erf(1.0 / (2.0 * math.sqrt(x))), rel=1e-10)

    def test_leading_term_is_published_constant(self):
        # c_{a,lam} = Gamma(1+a) sin(pi a) e^{lam^a}/(a pi)
        p = TemperedParams(0.5, 0.0, 1.0)
        assert sd.tempered_tail_leading(p, 100.0) == pytest.approx(
            0.05641895835, rel=1e-9)
        assert sd.tempered_tail(p, 100.0) == pytest.approx(0.0563719778,
                                                           rel=1e-8)

    def test_tempered_tail_exact_vs_quadrature(self):
        lam = 1.0
        p = TemperedParams(0.5, lam, 1.0)
        for x in (2.0, 4.0, 8.0):
            ref = math.exp(lam ** 0.5) * quad(
                lambda u: math.exp(-lam * u) * float(sd.stable_half_pdf(u, 1.0)),
                x, np.inf, limit=200)[0]
            assert sd.tempered_tail(p, x) == pytest.approx(ref, rel=1e-8)

    def test_published_constant_overstates_tempered_tail(self):
        # at the 1e-3 tail of D_{0.5,1}(1) the published approximant is an
        # order of magnitude above the true (quadrature) tail
        p = TemperedParams(0.5, 1.0, 1.0)
        x = 4.1774
        assert sd.tempered_tail_leading(p, x) / sd.tempered_tail(p, x) > 5.0


class TestMoments:
    def test_reference_values(self):
        assert sd.tempered_moments(TemperedParams(0.5, 1.0, 1.0)) == (
            pytest.approx(0.5), pytest.approx(0.5))
        assert sd.tempered_moments(TemperedParams(0.5, 4.0, 1.0))[0] == (
            pytest.approx(0.25))

    def test_time_scaling(self):
        m1, m2 = sd.tempered_moments(TemperedParams(0.7, 2.0, 3.0))
        b1, b2 = sd.tempered_moments(TemperedParams(0.7, 2.0, 1.0))
        assert m1 == pytest.approx(3.0 * b1, rel=1e-14)
        assert m2 - m1 ** 2 == pytest.approx(3.0 * (b2 - b1 ** 2), rel=1e-12)

    def test_against_quadrature(self):
        p = TemperedParams(0.6, 1.5, 1.0)
        pdf = sd.sanitized_pdf(lambda xs: sd.tempered_pdf_grid(p, xs))
        m1 = quad(lambda x: x * float(pdf(np.array([x]))[0]), 0, 60, limit=300)[0]
        m2 = quad(lambda x: x * x * float(pdf(np.array([x]))[0]), 0, 60,
                  limit=300)[0]
        got1, got2 = sd.tempered_moments(p)
        assert got1 == pytest.approx(m1, rel=1e-7)
        assert got2 == pytest.approx(m2, rel=1e-7)

    def test_lambda_monotonicity(self):
        for a in (0.3, 0.5, 0.8):
            m_small = sd.tempered_moments(TemperedParams(a, 0.5, 1.0))[0]
            m_big = sd.tempered_moments(TemperedParams(a, 2.0, 1.0))[0]
            assert m_small > m_big

    def test_lambda_zero_raises(self):
        with pytest.raises(DomainError):
            sd.tempered_moments(TemperedParams(0.5, 0.0, 1.0))
