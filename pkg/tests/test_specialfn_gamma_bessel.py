import cmath
import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whitbond.errors import DomainError, PoleError, SeriesRadiusExceeded
from whitbond.specialfn import (
    FnResult,
    bessel_i,
    bessel_j,
    bessel_k,
    bessel_k_imag,
    gamma,
    log_bessel_i,
    log_bessel_k,
    loggamma,
    rgamma,
)

from .conftest import rel_diff, richardson_derivative

# J_{3.7}(10) from a 60-digit mpmath series sum with a 3x term budget, frozen
J_3P7_AT_10 = -0.15480863843407155


def _mp_series_j(nu, x, terms):
    mpmath.mp.dps = 60
    nu = mpmath.mpf(nu)
    s = mpmath.mpf(0)
    for k in range(terms):
        s += (-1) ** k / (mpmath.factorial(k) * mpmath.gamma(nu + k + 1)) * (mpmath.mpf(x) / 2) ** (nu + 2 * k)
    mpmath.mp.dps = 15
    return float(s)


class TestFnResult:
    def test_rejects_negative_error(self):
        with pytest.raises(ValueError):
            FnResult(1.0, -1.0, 1)

    def test_rejects_zero_terms(self):
        with pytest.raises(ValueError):
            FnResult(1.0, 0.0, 0)


class TestGamma:
    def test_factorial(self):
        assert gamma(5).value == 24.0

    def test_half(self):
        assert abs(gamma(0.5).value - 1.7724538509055160) < 1e-15

    def test_imaginary_unit_reflection(self):
        g = complex(gamma(1j).value)
        assert rel_diff(abs(g) ** 2, math.pi / math.sinh(math.pi)) < 1e-12

    def test_pole_guard(self):
        with pytest.raises(PoleError):
            gamma(-3.0 + 1e-10)
        with pytest.raises(PoleError):
            gamma(0)

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            gamma(float("nan"))

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma(200.0 + 1j)

    @pytest.mark.parametrize("x", [0.1, 1.5, 7.25, 20.0, 49.9, -2.5, -0.3])
    def test_real_axis_accuracy(self, x, mp40):
        r = gamma(x)
        exact = float(mp40.gamma(x))
        assert abs(r.value - exact) <= 1e-13 * abs(exact)
        assert abs(r.value - exact) <= r.abs_err + 1e-300

    @pytest.mark.parametrize("z", [0.5 + 3j, -4.2 + 0.7j, 12 - 30j, 1e-3j, -40.5 + 2j])
    def test_complex_vs_mpmath(self, z, mp40):
        assert rel_diff(gamma(z).value, complex(mp40.gamma(z))) < 1e-12

    @pytest.mark.parametrize("z", [3 + 4j, -2500.3 + 0.1j, -7.5 - 80j, 150 + 150j])
    def test_loggamma_branch(self, z, mp40):
        exact = complex(mp40.loggamma(z))
        assert abs(complex(loggamma(z).value) - exact) < 1e-11 * max(1.0, abs(exact))

    def test_rgamma_zero_at_poles(self):
        assert rgamma(-4).value == 0.0

    @settings(max_examples=60, deadline=None)
    @given(st.complex_numbers(max_magnitude=40, allow_nan=False, allow_infinity=False))
    def test_recurrence(self, z):
        if abs(z - round(z.real)) < 1e-3 and z.real <= 0.5:
            return
        if abs(z + 1 - round(z.real + 1)) < 1e-3 and z.real <= -0.5:
            return
        lhs = complex(gamma(z + 1).value)
        rhs = z * complex(gamma(z).value)
        assert rel_diff(lhs, rhs) < 1e-11


class TestBesselJ:
    def test_zero(self):
        assert bessel_j(0, 0).value == 1.0

    def test_half_integer(self):
        assert abs(bessel_j(0.5, math.pi / 2).value - 2 / math.pi) < 1e-14

    def test_derived_value_matches_oracle(self):
        # the frozen constant reproduces from its extended-precision oracle
        assert abs(_mp_series_j(3.7, 10.0, 3 * 40) - J_3P7_AT_10) < 1e-15
        assert abs(bessel_j(3.7, 10.0).value - J_3P7_AT_10) < 1e-11

    def test_negative_x(self):
        with pytest.raises(DomainError):
            bessel_j(1, -1.0)

    def test_complex_order_radius(self):
        with pytest.raises(SeriesRadiusExceeded):
            bessel_j(1j, 41.0)

    def test_negative_integer_order(self):
        assert abs(bessel_j(-3, 4.0).value + bessel_j(3, 4.0).value) < 1e-15

    @pytest.mark.parametrize("nu", [0.0, 0.4, 1.0, 7.5, 33.3])
    @pytest.mark.parametrize("x", [0.01, 3.0, 25.0, 120.0, 200.0])
    def test_real_order_vs_mpmath(self, nu, x, mp40):
        r = bessel_j(nu, x)
        assert abs(r.value - float(mp40.besselj(nu, x))) < 1e-11

    @pytest.mark.parametrize("nu", [2j, 0.3 + 5j, 17j, -0.4 + 1j])
    @pytest.mark.parametrize("x", [0.5, 9.0, 39.0])
    def test_complex_order_vs_mpmath(self, nu, x, mp40):
        exact = complex(mp40.besselj(nu, x))
        assert abs(complex(bessel_j(nu, x).value) - exact) < 1e-9 * max(1.0, abs(exact))


class TestBesselIK:
    def test_i_zero(self):
        assert bessel_i(0, 0).value == 1.0

    def test_k_half_integer(self):
        assert rel_diff(bessel_k(0.5, 2.0).value, math.sqrt(math.pi / 4) * math.exp(-2)) < 1e-14

    def test_k_domain(self):
        with pytest.raises(DomainError):
            bessel_k(1.0, 0.0)

    def test_i_overflow_and_log(self, mp40):
        with pytest.raises(OverflowError):
            bessel_i(0.0, 800.0)
        assert rel_diff(log_bessel_i(0.0, 800.0).value, float(mp40.log(mp40.besseli(0, 800)))) < 1e-13

    def test_log_k_large_order(self, mp40):
        assert rel_diff(log_bessel_k(50.0, 1e-6).value, float(mp40.log(mp40.besselk(50, 1e-6)))) < 1e-12

    @pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.5, 13.7, -4.2, 50.0])
    @pytest.mark.parametrize("x", [1e-6, 0.01, 1.0, 17.0, 300.0])
    def test_vs_mpmath(self, nu, x, mp40):
        ei = mp40.besseli(nu, x)
        if 1e-300 < abs(ei) < 1e300:
            assert rel_diff(bessel_i(nu, x).value, float(ei)) < 1e-10
        ek = mp40.besselk(nu, x)
        if 1e-300 < abs(ek) < 1e300:
            r = bessel_k(nu, x)
            assert rel_diff(r.value, float(ek)) < 1e-10
            assert abs(r.value - float(ek)) <= r.abs_err

    @pytest.mark.parametrize("nu", [0.0, 0.3, 1.0, 2.5, 7.0])
    @pytest.mark.parametrize("z", [0.1, 1.0, 10.0])
    def test_wronskian(self, nu, z):
        def i_(x):
            return bessel_i(nu, x).value

        def k_(x):
            return bessel_k(nu, x).value

        h = 0.01 * z
        w = i_(z) * richardson_derivative(k_, z, h) - richardson_derivative(i_, z, h) * k_(z)
        assert abs(w + 1.0 / z) <= 1e-8 * (1.0 / z)

    @pytest.mark.parametrize("nu", [0.3, 1.7, 4.45])
    @pytest.mark.parametrize("z", [0.2, 1.0, 5.0])
    def test_k_from_i_relation(self, nu, z):
        k = bessel_k(nu, z).value
        lhs = k * 2 * math.sin(nu * math.pi) / math.pi + bessel_i(nu, z).value - bessel_i(-nu, z).value
        scale = max(abs(bessel_i(-nu, z).value), 1.0)
        assert abs(lhs) <= 1e-10 * scale

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 30.0), st.floats(0.05, 50.0))
    def test_k_even_in_order(self, nu, x):
        assert bessel_k(nu, x).value == bessel_k(-nu, x).value

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.5, 20.0), st.floats(0.05, 40.0))
    def test_i_recurrence(self, nu, x):
        # I_{nu-1} - I_{nu+1} = 2 nu / x I_nu
        lhs = bessel_i(nu - 1, x).value - bessel_i(nu + 1, x).value
        rhs = 2 * nu / x * bessel_i(nu, x).value
        assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), bessel_i(nu - 1, x).value)


class TestBesselKImag:
    @pytest.mark.parametrize("x", [0.5, 1.0, 5.0])
    def test_continuity_at_zero_order(self, x):
        assert rel_diff(bessel_k_imag(0.0, x).value, bessel_k(0.0, x).value) <= 1e-10
        assert rel_diff(bessel_k_imag(1e-9, x).value, bessel_k(0.0, x).value) <= 1e-10

    def test_real_valued(self):
        r = bessel_k_imag(1.0, 1.0)
        assert isinstance(r.value, float)
        assert complex(r.value).imag == 0.0

    def test_doubled_node_oracle(self):
        # the contour rule at half the step reproduces the production value
        from whitbond.specialfn.bessel import _k_imag_contour

        ref = _k_imag_contour(1.0, 1.0, h=0.0125)[0]
        assert rel_diff(bessel_k_imag(1.0, 1.0).value, ref) < 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_k_imag(1.0, 0.0)

    @pytest.mark.parametrize("theta", [0.5, 3.0, 20.0, 60.0, 100.0])
    @pytest.mark.parametrize("x", [1e-4, 0.3, 4.0, 45.0, 100.0])
    def test_vs_mpmath_envelope(self, theta, x, mp40):
        # relative to the local oscillation envelope so zeros do not matter
        exact = float(mp40.re(mp40.besselk(1j * theta, x)))
        env = max(abs(float(mp40.re(mp40.besselk(1j * theta, x * (1 + k / 200))))) for k in range(-3, 4))
        r = bessel_k_imag(theta, x)
        assert abs(r.value - exact) <= 1e-9 * env
        assert abs(r.value - exact) <= r.abs_err + 1e-12 * env
