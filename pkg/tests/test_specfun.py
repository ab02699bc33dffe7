import math

import mpmath as mp
import numpy as np
import pytest

from subdens import (MittagLefflerParams, NonConvergenceError, PoleError,
                     digamma, gamma, mittag_leffler, reciprocal_gamma)
from subdens.specfun import cospi, lg_rgamma, sinpi

mp.mp.dps = 40

EULER = 0.5772156649015328606


class TestGamma:
    def test_half(self):
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)

    def test_factorial(self):
        assert gamma(5) == 24.0

    def test_point_three_against_high_precision(self):
        # 30-digit oracle: mpmath.gamma('0.3')
        assert gamma(0.3) == pytest.approx(2.991568987687590628312517, rel=1e-13)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0])
    def test_poles_raise(self, x):
        with pytest.raises(PoleError):
            gamma(x)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma(172.0)

    def test_reflection_sweep(self):
        # Gamma(x) Gamma(1-x) sin(pi x)/pi = 1 on (0,1) off the half-integers
        for x in np.linspace(0.02, 0.98, 47):
            if abs(x - 0.5) < 1e-9:
                continue
            val = gamma(float(x)) * gamma(float(1 - x)) * sinpi(float(x)) / math.pi
            assert val == pytest.approx(1.0, abs=1e-12)

    def test_random_points_vs_mpmath(self, rng):
        for x in rng.uniform(0.05, 30.0, size=30):
            assert gamma(float(x)) == pytest.approx(
                float(mp.gamma(float(x))), rel=1e-13)


class TestReciprocalGamma:
    def test_poles_are_zero(self):
        assert reciprocal_gamma(0.0) == 0.0
        assert reciprocal_gamma(-3.0) == 0.0

    def test_one(self):
        assert reciprocal_gamma(1.0) == 1.0

    def test_negative_noninteger(self):
        # 1/Gamma(-1.5) via reflection; mpmath oracle
        assert reciprocal_gamma(-1.5) == pytest.approx(
            0.4231421876608172152110596, rel=1e-13)

    def test_total_function_no_raise(self, rng):
        for x in rng.uniform(-50.0, 50.0, size=200):
            reciprocal_gamma(float(x))

    def test_matches_gamma_on_positive(self, rng):
        for x in rng.uniform(0.1, 100.0, size=50):
            assert reciprocal_gamma(float(x)) == pytest.approx(
                1.0 / gamma(float(x)), rel=1e-13)


class TestDigamma:
    def test_at_one(self):
        assert digamma(1.0) == pytest.approx(-EULER, abs=1e-13)

    def test_at_two(self):
        assert digamma(2.0) == pytest.approx(1.0 - EULER, abs=1e-13)

    def test_at_half(self):
        # -EULER - 2 log 2; mpmath oracle to 25 digits
        assert digamma(0.5) == pytest.approx(-1.963510026021423479440976,
                                             abs=1e-13)

    def test_poles_raise(self):
        with pytest.raises(PoleError):
            digamma(0.0)
        with pytest.raises(PoleError):
            digamma(-4.0)

    def test_recurrence(self):
        for x in np.linspace(0.1, 50.0, 97):
            assert digamma(float(x + 1)) - digamma(float(x)) == pytest.approx(
                1.0 / x, abs=1e-11)

    def test_harmonic_identity(self):
        for k in (1, 5, 20, 60):
            expected = digamma(1.0) + sum(1.0 / m for m in range(1, k + 1))
            assert digamma(float(k + 1)) == pytest.approx(expected, abs=1e-12)

    def test_negative_and_positive_vs_mpmath(self, rng):
        for x in rng.uniform(-20.0, 100.0, size=60):
            if abs(x - round(x)) < 1e-3 and x < 0.5:
                continue
            assert digamma(float(x)) == pytest.approx(
                float(mp.digamma(float(x))), rel=2e-12, abs=1e-12)


class TestSinpiHelpers:
    def test_exact_zeros(self):
        assert sinpi(7.0) == 0.0
        assert sinpi(-12.0) == 0.0
        assert cospi(0.5) == 0.0

    def test_large_argument_accuracy(self):
        # naive sin(pi*x) loses digits by x ~ 1e4; the reduced form must not
        x = 12345.25
        assert sinpi(x) == pytest.approx(float(mp.sinpi(x)), rel=1e-14)

    def test_lg_rgamma_pole(self):
        lg, sg = lg_rgamma(-6.0)
        assert lg == -math.inf and sg == 0.0

    def test_lg_rgamma_vs_mpmath(self, rng):
        for x in rng.uniform(-80.0, 80.0, size=60):
            if abs(x - round(x)) < 1e-6:
                continue
            lg, sg = lg_rgamma(float(x))
            ref = 1.0 / mp.gamma(float(x))
            assert sg == math.copysign(1.0, float(ref))
            assert lg == pytest.approx(float(mp.log(abs(ref))), rel=0, abs=1e-10)


class TestMittagLeffler:
    def test_reduces_to_exp(self):
        p = MittagLefflerParams(1.0, 1.0, 1.0)
        assert mittag_leffler(p, 1.0).value == pytest.approx(math.e, rel=1e-12)
        for z in np.linspace(0.0, 20.0, 21):
            got = mittag_leffler(p, float(z)).value
            assert got == pytest.approx(math.exp(float(z)), rel=1e-10)

    def test_zero_argument_first_term_only(self):
        p = MittagLefflerParams(0.7, 2.3, 1.5)
        res = mittag_leffler(p, 0.0)
        assert res.value == reciprocal_gamma(2.3)
        assert res.terms_used == 1

    def test_frozen_point(self):
        # direct 50-digit summation oracle (see tests/conftest provenance)
        p = MittagLefflerParams(0.6, 1.2, 2.0)
        got = mittag_leffler(p, 0.7)
        assert got.value == pytest.approx(4.98147874724349166319919, rel=1e-13)
        assert got.err_estimate < 1e-13 * got.value

    def test_random_sweep_vs_mpmath(self, rng):
        for _ in range(20):
            a = float(rng.uniform(0.3, 2.0))
            b = float(rng.uniform(0.2, 3.0))
            c = float(rng.uniform(0.5, 3.0))
            z = float(rng.uniform(0.0, 5.0))
            ref = mp.mpf(0)
            for k in range(260):
                ref += (mp.gamma(c + k) * mp.mpf(z) ** k
                        / (mp.gamma(c) * mp.gamma(a * k + b) * mp.factorial(k)))
            got = mittag_leffler(MittagLefflerParams(a, b, c), z)
            assert got.value == pytest.approx(float(ref), rel=1e-12)

    def test_negative_b_pole_rows_are_zero(self):
        # b = -0.5: the n=0 term has Gamma(-0.5) finite; choose b so a*n+b
        # hits a pole for some n and the series must skip it
        p = MittagLefflerParams(1.0, -2.0, 1.0)  # a*n+b = n-2: poles at n=0,1,2
        got = mittag_leffler(p, 1.5)
        ref = mp.mpf(0)
        for k in range(200):
            den = mp.gamma(k - 2) if k - 2 not in (0, -1, -2) else mp.inf
            ref += mp.gamma(1 + k) * mp.mpf(1.5) ** k / (mp.gamma(1) * den * mp.factorial(k))
        assert got.value == pytest.approx(float(ref), rel=1e-12)

    def test_term_cap_raises(self):
        p = MittagLefflerParams(0.05, 1.0, 1.0)
        with pytest.raises(NonConvergenceError):
            mittag_leffler(p, 50.0, cap=64)
