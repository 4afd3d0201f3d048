import math

import numpy as np
import pytest

from whitbond.errors import ConvergenceError, EvaluationError, TailError, ValidationError
from whitbond.quadrature import (
    DecayHint,
    QuadratureSpec,
    integrate_2d,
    integrate_interval,
    integrate_oscillatory_bessel,
    integrate_semi_infinite,
    laplace_invert,
    mcmahon_zero,
)
from whitbond.specialfn import (
    bessel_k,
    gamma,
    log_bessel_i,
    log_bessel_k,
    whittaker_m,
    whittaker_w,
)

from .conftest import rel_diff

SPEC = QuadratureSpec()


def G(x):
    return gamma(x).value


def vec(fn):
    return np.vectorize(fn, otypes=[float])


class TestSpec:
    @pytest.mark.parametrize("kw", [{"rel_tol": 0.0}, {"abs_tol": -1.0}, {"max_panels": 0},
                                    {"talbot_nodes": 7}, {"talbot_nodes": 6},
                                    {"truncation_tail_bound": math.nan}])
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            QuadratureSpec(**kw)

    def test_defaults(self):
        s = QuadratureSpec()
        assert (s.rel_tol, s.abs_tol, s.max_panels, s.truncation_tail_bound, s.talbot_nodes) == \
            (1e-8, 1e-12, 2000, 1e-12, 48)

    def test_decay_hint_validation(self):
        with pytest.raises(ValidationError):
            DecayHint("weird", 1.0)
        with pytest.raises(ValidationError):
            DecayHint("exponential", 0.0)

    def test_tail_bounds_hold(self):
        h = DecayHint("exponential", 2.0, power=1.0)
        # int_t^inf x e^{-2x} dx = (2t+1) e^{-2t}/4
        for t in (1.0, 3.0, 10.0):
            assert h.tail(t) >= (2 * t + 1) * math.exp(-2 * t) / 4
        g = DecayHint("gaussian", 0.5)
        assert g.tail(3.0) >= math.sqrt(math.pi / 2) * math.erfc(3.0 / math.sqrt(2))
        a = DecayHint("algebraic", 3.0)
        assert a.tail(2.0) == pytest.approx(2.0 ** -2 / 2)

    def test_no_truncation_point(self):
        with pytest.raises(TailError):
            integrate_semi_infinite(lambda x: 1 / (1 + x) ** 1.0000001, SPEC,
                                    decay=DecayHint("algebraic", 1.0000001))


class TestBasicIntegrals:
    def test_exponential(self):
        r = integrate_semi_infinite(lambda x: np.exp(-x), SPEC,
                                    decay=DecayHint("exponential", 1.0))
        assert abs(r.value - 1.0) < 1e-12
        assert r.err_estimate >= 0 and r.truncated_at > 0

    def test_interval_polynomial(self):
        r = integrate_interval(lambda x: x ** 5, 0.0, 2.0)
        assert r.value == pytest.approx(64 / 6, rel=1e-14)

    def test_interval_endpoint_singularity(self):
        # bisection alone: the singular panel limits accuracy to about sqrt(panel width floor)
        r = integrate_interval(lambda x: 1 / np.sqrt(x), 0.0, 1.0, QuadratureSpec(rel_tol=1e-6))
        assert abs(r.value - 2.0) <= max(r.err_estimate, 2e-6)

    def test_budget_exhaustion(self):
        with pytest.raises(ConvergenceError):
            integrate_interval(lambda x: np.sin(1 / np.maximum(x, 1e-300)), 0.0, 1.0,
                               QuadratureSpec(rel_tol=1e-14, abs_tol=1e-16, max_panels=20))

    def test_invalid_interval(self):
        with pytest.raises(ValidationError):
            integrate_interval(lambda x: x, 1.0, 0.0)

    def test_first_kind_bessel_integral(self):
        r = integrate_oscillatory_bessel(lambda x: np.ones_like(x), 1.0, SPEC)
        assert abs(r.value - 1.0) < 1e-8

    def test_damped_matches_semi_infinite(self):
        from whitbond.specialfn import bessel_j_array
        rate = 0.01
        g = lambda x: x ** 0.5 * np.exp(-rate * x * x)
        hint = DecayHint("gaussian", rate, power=0.5)
        a = integrate_oscillatory_bessel(g, 2.0, SPEC, decay=hint)
        b = integrate_semi_infinite(lambda x: g(x) * bessel_j_array(2.0, x), SPEC, decay=hint,
                                    breakpoints=[mcmahon_zero(2.0, k) for k in range(1, 40)])
        assert abs(a.value - b.value) <= a.err_estimate + b.err_estimate + 1e-10

    def test_mcmahon_zeros(self):
        # tabulated zeros of J_0 and J_1
        assert mcmahon_zero(0.0, 1) == pytest.approx(2.404825557695773, abs=1e-2)
        assert mcmahon_zero(1.0, 5) == pytest.approx(16.47063005087763, abs=1e-3)

    def test_2d_exponential(self):
        r = integrate_2d(lambda x, y: np.exp(-x - y), SPEC, decay_x=DecayHint("exponential", 1.0),
                         decay_y=DecayHint("exponential", 1.0))
        assert abs(r.value - 1.0) < 1e-10

    def test_2d_separable_product(self):
        # int x^{1/2} e^{-x} dx * int y^2 e^{-2y} dy = Gamma(3/2) * 2/8
        r = integrate_2d(lambda x, y: x ** 0.5 * np.exp(-x) * y * y * np.exp(-2 * y), SPEC,
                         decay_x=DecayHint("exponential", 1.0, power=0.5),
                         decay_y=DecayHint("exponential", 2.0, power=2.0))
        assert rel_diff(r.value, G(1.5) * 0.25) < 1e-8

    def test_refinement_is_monotone(self):
        exact = 2 ** 0.2 * G(1.3) / G(1.1)
        errs = []
        for tol in (1e-4, 1e-6, 1e-8, 1e-10):
            s = QuadratureSpec(rel_tol=tol)
            v = integrate_oscillatory_bessel(lambda x: x ** 0.2, 1.4, s).value
            errs.append(abs(v - exact))
        assert all(b <= a * 1.01 + 1e-15 for a, b in zip(errs, errs[1:]))


class TestTalbot:
    @pytest.mark.parametrize("F,t,exact", [
        (lambda s: 1 / s, 1.0, 1.0),
        (lambda s: 1 / (s + 0.7), 2.0, math.exp(-1.4)),
        (lambda s: 1 / s ** 2, 3.0, 3.0),
        (lambda s: 1 / (s * s + 1), 2.0, math.sin(2.0)),
    ])
    def test_known_pairs(self, F, t, exact):
        r = laplace_invert(F, t, SPEC)
        assert abs(r.value - exact) < 1e-8
        assert abs(r.value - exact) <= r.err_estimate

    def test_node_doubling_bound(self):
        F = lambda s: 1 / (s + 0.7) ** 1.5
        a = laplace_invert(F, 1.3, QuadratureSpec(talbot_nodes=24))
        b = laplace_invert(F, 1.3, QuadratureSpec(talbot_nodes=48))
        assert abs(a.value - b.value) <= a.err_estimate

    def test_branch_point_respected(self):
        # 1/sqrt(s + 3): original t^{-1/2} e^{-3t}/sqrt(pi)
        r = laplace_invert(lambda s: 1 / np.sqrt(s + 3), 1.0, SPEC, branch_point=-3.0)
        assert abs(r.value - math.exp(-3) / math.sqrt(math.pi)) < 1e-8

    def test_failing_image(self):
        def bad(s):
            raise ZeroDivisionError

        with pytest.raises(EvaluationError):
            laplace_invert(bad, 1.0, SPEC)

    def test_invalid_time(self):
        with pytest.raises(ValidationError):
            laplace_invert(lambda s: 1 / s, 0.0, SPEC)


class TestIdentitySuite:
    """Tabulated integral identities behind the pricing formulas, checked with
    specialfn and quadrature only, to rel 1e-6 and within the error estimate."""

    @staticmethod
    def check(est, exact):
        assert rel_diff(est.value, exact) < 1e-6
        assert abs(est.value - exact) <= est.err_estimate + 1e-15 * abs(exact)

    @pytest.mark.parametrize("mu,nu,a", [(0.0, 1.0, 1.0), (0.2, 1.4, 1.0), (-0.5, 2.3, 2.0),
                                         (0.4, 0.5, 0.5)])
    def test_weber_schafheitlin(self, mu, nu, a):
        # int x^mu J_nu(a x) dx = 2^mu a^{-mu-1} Gamma(1/2+nu/2+mu/2)/Gamma(1/2+nu/2-mu/2)
        est = integrate_oscillatory_bessel(lambda u: (u / a) ** mu / a, nu, SPEC)
        self.check(est, 2 ** mu * a ** (-mu - 1) * G(0.5 + nu / 2 + mu / 2) / G(0.5 + nu / 2 - mu / 2))

    def test_weber_schafheitlin_ci_exponents(self):
        # the tau -> 0 normalisation of the CI integral form: lam = -1/2, beta = 0.4
        beta, lam = 0.4, -0.5
        mu = math.sqrt(0.25 + 2 / beta ** 2 + (lam + 1) ** 2 - (lam + 1))
        est = integrate_oscillatory_bessel(lambda t: t ** (2 * lam), 2 * mu, SPEC)
        self.check(est, 2 ** (2 * lam) * G(0.5 + mu + lam) / G(0.5 + mu - lam))

    @pytest.mark.parametrize("mu,nu,al,be", [(0.3, 1.2, 0.5, 1.3), (-0.4, 2.5, 0.02, 1.0),
                                             (1.5, 0.0, 0.2, 2.0)])
    def test_gaussian_damped_bessel_is_whittaker_m(self, mu, nu, al, be):
        # int x^mu e^{-al x^2} J_nu(be x) dx
        #   = Gamma((nu+mu+1)/2)/(be al^{mu/2} Gamma(nu+1)) e^{-be^2/8al} M_{mu/2,nu/2}(be^2/4al)
        rate = al / be ** 2
        hint = DecayHint("gaussian", rate, power=mu, amplitude=be ** (-mu - 1))
        est = integrate_oscillatory_bessel(lambda u: (u / be) ** mu * np.exp(-rate * u * u) / be,
                                           nu, SPEC, decay=hint)
        z = be ** 2 / (4 * al)
        exact = G((nu + mu + 1) / 2) / (be * al ** (mu / 2) * G(nu + 1)) * math.exp(-z / 2) \
            * whittaker_m((mu / 2, nu / 2), z).value
        self.check(est, exact)

    @pytest.mark.parametrize("nu,a,b,c", [(0.5, 2.0, 1.0, 1.0), (0.0, 1.5, 0.5, 2.0),
                                          (1.3, 3.0, 1.0, 0.5)])
    def test_bessel_product_resolvent(self, nu, a, b, c):
        # int x J_nu(a x) J_nu(b x)/(x^2+c^2) dx = I_nu(b c) K_nu(a c) for b < a,
        # via 1/(x^2+c^2) = int e^{-(x^2+c^2) s} ds and
        # int x e^{-s x^2} J_nu(a x) J_nu(b x) dx = e^{-(a^2+b^2)/4s} I_nu(ab/2s)/(2s)
        @vec
        def f(s):
            z = a * b / (2 * s)
            return math.exp(-c * c * s - (a * a + b * b) / (4 * s) + log_bessel_i(nu, z).value) / (2 * s)

        amp = math.exp(log_bessel_i(nu, a * b / 2).value) / 2
        hint = DecayHint("exponential", c * c, amplitude=amp, start=1.0)
        est = integrate_semi_infinite(f, SPEC, decay=hint, breakpoints=[0.01, 0.1, 1.0])
        exact = math.exp(log_bessel_i(nu, b * c).value + log_bessel_k(nu, a * c).value)
        self.check(est, exact)

    @pytest.mark.parametrize("nu,a,b", [(0.5, 1.0, 2.0), (0.0, 2.0, 1.0), (-0.5, 1.0, 1.0),
                                        (1.2, 1.0, 0.7)])
    def test_hankel_type_k_integral(self, nu, a, b):
        # int x^{nu+1} J_nu(a x)/(x^2+b^2) dx = b^nu K_nu(a b)
        est = integrate_oscillatory_bessel(lambda u: (u / a) ** (nu + 1) / ((u / a) ** 2 + b * b) / a,
                                           nu, SPEC)
        self.check(est, b ** nu * bessel_k(nu, a * b).value)

    @pytest.mark.parametrize("mu,nu,a", [(0.5, 0.3, 1.0), (2.0, 1.5, 2.0), (0.0, 0.0, 1.0),
                                         (1.0, 0.9, 0.5)])
    def test_mellin_transform_of_k(self, mu, nu, a):
        # int x^mu K_nu(a x) dx = 2^{mu-1} a^{-mu-1} Gamma((1+mu+nu)/2) Gamma((1+mu-nu)/2)
        f = vec(lambda x: x ** mu * bessel_k(nu, a * x).value)
        # K_nu(y) <= 2 sqrt(pi/(2y)) e^{-y} once y >= max(1, nu^2)
        start = max(1.0, nu * nu) / a
        hint = DecayHint("exponential", a, power=mu - 0.5, amplitude=2 * math.sqrt(math.pi / (2 * a)),
                         start=start)
        est = integrate_semi_infinite(f, SPEC, decay=hint, breakpoints=[1e-6, 1e-3, 0.1, start])
        self.check(est, 2 ** (mu - 1) * a ** (-mu - 1) * G((1 + mu + nu) / 2) * G((1 + mu - nu) / 2))

    @pytest.mark.parametrize("a1,a2,t,nu,mu", [(2.0, 1.0, 1.0, 0.3, 0.8), (3.0, 0.5, 2.0, -0.4, 0.5),
                                               (1.5, 1.0, 0.7, 0.9, 1.2)])
    def test_coth_bessel_is_whittaker_product(self, a1, a2, t, nu, mu):
        # int e^{-(a1+a2) t cosh x/2} coth^{2 nu}(x/2) I_{2 mu}(t sqrt(a1 a2) sinh x) dx
        #   = Gamma(1/2+mu-nu)/(t sqrt(a1 a2) Gamma(1+2 mu)) W_{nu,mu}(a1 t) M_{nu,mu}(a2 t)
        g = t * math.sqrt(a1 * a2)

        @vec
        def f(x):
            lc = 2 * nu * math.log(1 / math.tanh(x / 2))
            return math.exp(-(a1 + a2) * t * math.cosh(x) / 2 + lc
                            + log_bessel_i(2 * mu, g * math.sinh(x)).value)

        # I_{2mu}(z) <= e^z and cosh x >= x^2/2 leave e^{-t (sqrt a1 - sqrt a2)^2 x^2/4}
        k = t * (math.sqrt(a1) - math.sqrt(a2)) ** 2 / 4
        hint = DecayHint("gaussian", k, amplitude=(1 / math.tanh(0.5)) ** (2 * abs(nu)), start=1.0)
        est = integrate_semi_infinite(f, SPEC, decay=hint, breakpoints=[1e-4, 1e-2, 0.3, 1.0])
        exact = G(0.5 + mu - nu) / (g * G(1 + 2 * mu)) * whittaker_w((nu, mu), a1 * t).value \
            * whittaker_m((nu, mu), a2 * t).value
        self.check(est, exact)

    @pytest.mark.parametrize("mu,nu,al,be", [(0.7, 0.4, 1.5, 0.8), (1.5, 1.0, 1.0, 1.0),
                                             (0.2, 0.1, 2.0, 0.5)])
    def test_laplace_transform_of_bessel_i(self, mu, nu, al, be):
        # int x^{mu-1/2} e^{-al x} I_{2nu}(2 be sqrt x) dx
        #   = Gamma(mu+nu+1/2)/(be Gamma(2nu+1)) e^{+be^2/2al} al^{-mu} M_{-mu,nu}(be^2/al)
        @vec
        def f(x):
            return math.exp((mu - 0.5) * math.log(x) - al * x
                            + log_bessel_i(2 * nu, 2 * be * math.sqrt(x)).value)

        # 2 be sqrt x <= al x/2 + 2 be^2/al
        hint = DecayHint("exponential", al / 2, power=mu - 0.5, amplitude=math.exp(2 * be * be / al))
        est = integrate_semi_infinite(f, SPEC, decay=hint, breakpoints=[1e-3, 0.1, 1.0, 10.0])
        z = be * be / al
        exact = G(mu + nu + 0.5) / (be * G(2 * nu + 1)) * math.exp(z / 2) * al ** (-mu) \
            * whittaker_m((-mu, nu), z).value
        self.check(est, exact)
