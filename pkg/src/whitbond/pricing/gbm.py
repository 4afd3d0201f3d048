"""Geometric Brownian motion short rate ``dr = alpha r dt + beta r dW``.

The Laplace image in ``tau`` of the price at ``y = sqrt(r)`` is

``V = sigma^2 [K_nu(c) int_0^1 p^{2 lam} I_nu(c p) dp
+ I_nu(c) int_1^inf p^{2 lam} K_nu(c p) dp]``

with ``c = sigma y``, ``k = 2 lam + 1`` and ``nu = sqrt(k^2 + sigma^2 eta)``.
Writing ``int_1^inf = int_0^inf - int_0^1`` and integrating the power series
of ``I_{+-nu}`` term by term gives the form used for pricing,

``V/sigma^2 = [I~_{-nu} S~(nu) - I~_nu S~(-nu)]/(2 nu) + I_nu(c) G(nu)``,

``I~_nu = sum_j q^j/(j! (nu+1)_j)``,
``S~(nu) = sum_j q^j/(j! (nu+1)_j (k + nu + 2j))``, ``q = c^2/4``,
``G = 2^{2 lam - 1} c^{-k} Gamma((k+nu)/2) Gamma((k-nu)/2)``,

which is analytic in complex ``eta`` and free of overflow. Its individual
terms have removable poles at integer ``nu`` and at ``nu = k + 2j``; near
those the value is the mean over a small circle in the ``nu`` plane.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import BranchError, ConvergenceError, SeriesRadiusExceeded, ValidationError, WhitbondError
from ..models import GBM, ModelConstants, PricingQuery, derive_constants
from ..quadrature import (
    DecayHint,
    QuadratureSpec,
    integrate_interval,
    integrate_oscillatory_bessel,
    integrate_semi_infinite,
    laplace_invert,
)
from ..specialfn import SERIES_RADIUS, bessel_i, bessel_k, loggamma
from ..specialfn.bessel import bessel_k_imag_array
from ..specialfn.gamma import loggamma_c
from .ci import SMALL_RT
from ._types import (
    CLOSED_FORM_AGREES,
    CLOSED_FORM_DISCREPANCY,
    CLOSED_FORM_UNAVAILABLE,
    DEGENERATE_SMALL_RT,
    IMAGE_CANCELLATION,
    TYPO_LEDGER_APPLIED,
    Method,
    PriceEstimate,
    boundary_estimate,
    finish,
)

EPS = 2.220446049250313e-16
# distance in nu below which a removable pole is averaged out
_POLE_DISTANCE = 0.02
_CIRCLE_RADIUS = 0.1
_CIRCLE_NODES = 16
# c = sigma sqrt(r) beyond which the series loses more than ~e^{2c} in cancellation
_CANCELLATION_C = 12.0
# tolerated ratio of closed-form integrand size to the price
_CLOSED_CANCELLATION = 1e6


def _check_gbm(c: ModelConstants):
    if not isinstance(c.model, GBM):
        raise ValidationError("GBM image needs constants of a GBM model")


def branch_point(c: ModelConstants) -> float:
    """``-(2 lam + 1)^2 / sigma^2``, the branch point of ``nu(eta)``."""
    return -((2.0 * c.lam + 1.0) ** 2) / c.sigma ** 2


def _series_pair(nu: complex, q: float, k: float):
    """``(I~_nu, S~(nu))`` summed together."""
    term = 1.0 + 0.0j
    i_sum = term
    s_sum = term / (k + nu)
    j = 0
    while True:
        term = term * q / ((j + 1) * (nu + j + 1))
        j += 1
        i_sum += term
        s_term = term / (k + nu + 2 * j)
        s_sum += s_term
        if abs(term) <= 1e-17 * abs(i_sum) and abs(s_term) <= 1e-17 * abs(s_sum) and j > q:
            return i_sum, s_sum


def _image_nu(nu: complex, lam: float, c_arg: float) -> complex:
    """``V/sigma^2`` as a function of ``nu`` (series form)."""
    k = 2.0 * lam + 1.0
    q = 0.25 * c_arg * c_arg
    ip, sp = _series_pair(nu, q, k)
    im, sm = _series_pair(-nu, q, k)
    first = (im * sp - ip * sm) / (2.0 * nu)
    log_ig = (nu * math.log(0.5 * c_arg) - loggamma_c(nu + 1.0)
              + loggamma_c(0.5 * (k + nu)) + loggamma_c(0.5 * (k - nu))
              + (2.0 * lam - 1.0) * math.log(2.0) - k * math.log(c_arg))
    return first + cmath.exp(log_ig) * ip


def _removable_distance(nu: complex, k: float) -> float:
    """Distance from ``nu`` to the nearest removable pole of the series terms."""
    best = math.inf
    n = round(nu.real)
    if n >= 1:
        best = abs(nu - n)
    j = round((nu.real - k) / 2.0)
    if j >= 0 and k + 2 * j > 0:
        best = min(best, abs(nu - (k + 2 * j)))
    return best


def _genuine_pole_distance(nu: complex, k: float) -> float:
    # Gamma((k+nu)/2) poles at nu = -k - 2j can be true poles of V (eta <= 0)
    j = round((-k - nu.real) / 2.0)
    if j < 0 or -k - 2 * j <= 0:
        return math.inf
    return abs(nu - (-k - 2 * j))


def _image_series(lam: float, sigma: float, c_arg: float, eta: complex) -> complex:
    k = 2.0 * lam + 1.0
    nu = cmath.sqrt(k * k + sigma * sigma * eta)
    if _removable_distance(nu, k) >= _POLE_DISTANCE:
        return sigma * sigma * _image_nu(nu, lam, c_arg)
    rho = min(_CIRCLE_RADIUS, 0.5 * abs(nu), 0.5 * _genuine_pole_distance(nu, k))
    nodes = [nu + rho * cmath.exp(1j * math.pi * (2 * m + 1) / _CIRCLE_NODES)
             for m in range(_CIRCLE_NODES)]
    return sigma * sigma * sum(_image_nu(w, lam, c_arg) for w in nodes) / _CIRCLE_NODES


def _real_nu(c: ModelConstants, eta: float) -> float:
    k = 2.0 * c.lam + 1.0
    return math.sqrt(k * k + c.sigma ** 2 * eta)


def _image_ik(c: ModelConstants, y: float, eta: float, spec: QuadratureSpec) -> float:
    """Two-integral form with Bessel ``I`` and ``K`` of real order."""
    lam, sigma = c.lam, c.sigma
    nu = _real_nu(c, eta)
    c_arg = sigma * y

    def f_in(p):
        return np.array([t ** (2.0 * lam) * bessel_i(nu, c_arg * t).value for t in p])

    def f_out(p):
        return np.array([t ** (2.0 * lam) * bessel_k(nu, c_arg * t).value for t in p])

    # sqrt(x) e^x K_nu(x) is monotone: decreasing for nu >= 1/2, bounded by sqrt(pi/2) otherwise
    env = max(bessel_k(nu, c_arg).value * math.exp(c_arg) * math.sqrt(c_arg), math.sqrt(math.pi / 2.0))
    # so p^{2 lam} K_nu(c p) <= env c^{-1/2} p^{2 lam - 1/2} e^{-c p} for p >= 1
    hint = DecayHint("exponential", c_arg, power=2.0 * lam - 0.5,
                     amplitude=env / math.sqrt(c_arg), start=1.0)
    i1 = integrate_interval(f_in, 0.0, 1.0, spec)
    i2 = integrate_semi_infinite(f_out, spec, decay=hint, lower=1.0)
    return sigma ** 2 * (bessel_k(nu, c_arg).value * i1.value + bessel_i(nu, c_arg).value * i2.value)


def _image_j(c: ModelConstants, y: float, eta: float, spec: QuadratureSpec) -> float:
    """Single oscillatory integral over ``J_nu``; needs ``2 lam + 1 > -3/2``."""
    lam, sigma = c.lam, c.sigma
    nu = _real_nu(c, eta)
    c2 = (sigma * y) ** 2
    if not 2.0 * lam + 1.0 > -1.5 or not nu - 2.0 * lam > -1.0:
        raise ValidationError("the J-integral form needs 2 lam + 1 > -3/2 and nu - 2 lam > -1")

    def g(z):
        return z ** (-2.0 * lam) / (z * z + c2)

    est = integrate_oscillatory_bessel(g, nu, spec)
    ratio = cmath.exp(loggamma_c(complex(0.5 + lam + 0.5 * nu)) - loggamma_c(complex(0.5 - lam + 0.5 * nu)))
    return sigma ** 2 * 2.0 ** (2.0 * lam) * ratio.real * est.value


def gbm_laplace_image(c: ModelConstants, y: float, eta, *, form: str = "series",
                      spec: QuadratureSpec | None = None):
    """Laplace image ``V(y, eta)`` of the GBM bond price in ``tau``.

    Parameters
    ----------
    c : ModelConstants
        Constants of a :class:`GBM` model.
    y : float
        ``sqrt(r)``, positive.
    eta : complex
        Transform variable, right of the branch point on the real axis.
    form : {"series", "ik_integrals", "j_integral"}
        ``"series"`` works for complex ``eta``; the two quadrature forms
        take real ``eta`` only and serve as independent checks.

    Raises
    ------
    BranchError
        Real ``eta`` on or left of the branch point.
    """
    _check_gbm(c)
    if not (isinstance(y, (int, float)) and math.isfinite(y) and y > 0.0):
        raise ValidationError("y must be a positive finite number")
    eta = complex(eta)
    bp = branch_point(c)
    if eta.imag == 0.0 and eta.real <= bp:
        raise BranchError(f"eta={eta.real:g} is on the cut left of the branch point {bp:g}")
    if form == "series":
        v = _image_series(c.lam, c.sigma, c.sigma * y, eta)
        return v.real if eta.imag == 0.0 else v
    if eta.imag != 0.0:
        raise ValidationError(f"form {form!r} takes real eta only")
    spec = spec or QuadratureSpec()
    if form == "ik_integrals":
        return _image_ik(c, y, eta.real, spec)
    if form == "j_integral":
        return _image_j(c, y, eta.real, spec)
    raise ValidationError(f"unknown image form {form!r}")


def gbm_laplace_price(c: ModelConstants, q: PricingQuery, spec: QuadratureSpec | None = None):
    """Talbot inversion of the series image; returns an ``IntegralEstimate``."""
    _check_gbm(c)
    y = math.sqrt(q.r)
    lam, sigma, c_arg = c.lam, c.sigma, c.sigma * y
    return laplace_invert(lambda e: _image_series(lam, sigma, c_arg, e), q.tau, spec,
                          branch_point=branch_point(c))


def _closed_hint(c: ModelConstants, q: PricingQuery, integrand) -> DecayHint:
    # |Gamma((k+i t)/2)|^2 sinh(pi t) |K_{it}(c)| grows like t^{k-1/2}; the
    # amplitude is measured on a grid and padded, so this bound is empirical
    k = 2.0 * c.lam + 1.0
    rate = q.tau / c.sigma ** 2
    grid = np.linspace(1.0, max(4.0, 3.0 * math.sqrt(40.0 / rate)), 60)
    vals = np.abs(integrand(grid)) / (grid ** (k + 0.5) * np.exp(-rate * grid ** 2))
    return DecayHint("gaussian", rate, power=k + 0.5, amplitude=10.0 * float(vals.max()) + 1e-300,
                     start=1.0)


def gbm_closed_form(c: ModelConstants, q: PricingQuery, spec: QuadratureSpec | None = None):
    """Closed-form price; returns ``(value, err, diagnostics)``.

    For ``2 lam + 1 > 0``:

    ``P = e^{-tau k^2/sigma^2}/(2 pi^2) (c/2)^{-k} int_0^inf
    |Gamma((k + i t)/2)|^2 t e^{-t^2 tau/sigma^2} sinh(pi t) K_{it}(c) dt``.

    For ``2 lam + 1 < 0`` the price is the residue term
    ``2/Gamma(-k) (c/2)^{-k} K_{-k}(c)`` plus a double integral over
    ``J_{it}(zeta)`` for all ``zeta > 0``; complex-order ``J`` is available
    only up to the series radius, so that case raises after recording the
    residue.

    Raises
    ------
    SeriesRadiusExceeded
        ``2 lam + 1 < 0``.
    ConvergenceError
        Small ``c``, where the oscillatory integral cancels to far below
        the size of its integrand.
    ValidationError
        ``2 lam + 1 = 0``, where neither form applies.
    """
    _check_gbm(c)
    spec = spec or QuadratureSpec()
    k = 2.0 * c.lam + 1.0
    sigma = c.sigma
    c_arg = sigma * math.sqrt(q.r)
    if k == 0.0:
        raise ValidationError("no closed form at 2 lam + 1 = 0; use the Laplace route")
    if k < 0.0:
        residue = 2.0 * math.exp(-float(loggamma(-k).value)) * (0.5 * c_arg) ** (-k) \
            * bessel_k(-k, c_arg).value
        raise SeriesRadiusExceeded(
            f"the J_(i theta)(zeta) integral runs over all zeta > 0 but complex-order J "
            f"is limited to zeta <= {SERIES_RADIUS:g}; residue term alone = {residue:.17g}")
    rate = q.tau / sigma ** 2

    def integrand(t):
        t = np.asarray(t, dtype=float)
        lg = np.array([2.0 * loggamma_c(complex(0.5 * k, 0.5 * ti)).real for ti in t])
        log_sinh = np.pi * t + np.log1p(-np.exp(-2.0 * np.pi * t)) - math.log(2.0)
        kv = bessel_k_imag_array(t, c_arg)
        return np.exp(lg + log_sinh - rate * t * t) * t * kv

    pref = math.exp(-q.tau * k * k / sigma ** 2 - k * math.log(0.5 * c_arg)) / (2.0 * math.pi ** 2)
    # a price <= 1 from integrand values this large means digits cancel away
    peak = float(np.abs(integrand(np.linspace(0.05, 20.0, 80))).max())
    if pref * peak > _CLOSED_CANCELLATION:
        raise ConvergenceError(f"closed form cancels {pref * peak:.2g}-fold at c={c_arg:g}; "
                               "use the Laplace route")
    hint = _closed_hint(c, q, integrand)
    est = integrate_semi_infinite(integrand, spec, decay=hint)
    value = pref * est.value
    err = pref * est.err_estimate + 8.0 * EPS * abs(value)
    return value, err, {"truncated_at": est.truncated_at}


def gbm_residue(c: ModelConstants, r: float) -> float:
    """Residue at ``eta = 0`` for ``2 lam + 1 < 0``: ``2/Gamma(-k) (c/2)^{-k} K_{-k}(c)``.

    This is the ``tau -> infinity`` limit of the price; zero when ``2 lam + 1 > 0``.
    """
    _check_gbm(c)
    k = 2.0 * c.lam + 1.0
    if k >= 0.0:
        return 0.0
    c_arg = c.sigma * math.sqrt(r)
    return 2.0 * math.exp(-float(loggamma(-k).value)) * (0.5 * c_arg) ** (-k) * bessel_k(-k, c_arg).value


def price_gbm(model: GBM, q: PricingQuery, spec: QuadratureSpec | None = None, *,
              method: str = "laplace") -> PriceEstimate:
    """GBM bond price.

    ``method="laplace"`` (authoritative) inverts the image on a Talbot
    contour and also evaluates the closed form, recording the comparison in
    ``flags`` and ``diagnostics``. ``method="closed"`` returns the closed
    form alone.
    """
    if method not in ("laplace", "closed"):
        raise ValidationError(f"unknown GBM method {method!r}")
    m_enum = Method.GBM_LAPLACE if method == "laplace" else Method.GBM_CLOSED
    if q.tau == 0.0 or q.r == 0.0:
        return boundary_estimate(m_enum)
    if q.r * q.tau < SMALL_RT:
        # 1 - P <= E int r dt = r (e^{alpha tau} - 1)/alpha
        a = model.alpha
        mean_int = q.r * (math.expm1(a * q.tau) / a if a != 0.0 else q.tau)
        return finish(1.0, mean_int, m_enum, {DEGENERATE_SMALL_RT})
    c = derive_constants(model)
    spec = spec or QuadratureSpec()
    if method == "closed":
        v, err, diag = gbm_closed_form(c, q, spec)
        return finish(v, err, m_enum, {TYPO_LEDGER_APPLIED}, diag)
    est = gbm_laplace_price(c, q, spec)
    flags = set()
    diag = {"branch_point": branch_point(c)}
    if c.sigma * math.sqrt(q.r) > _CANCELLATION_C:
        flags.add(IMAGE_CANCELLATION)
    try:
        cv, cerr, _ = gbm_closed_form(c, q, spec)
    except (WhitbondError, ArithmeticError) as exc:
        # the closed form is a cross-check only; its failure is recorded
        flags.add(CLOSED_FORM_UNAVAILABLE)
        diag["closed_form_note"] = str(exc)
    else:
        gap = float(abs(cv - est.value))
        diag.update(closed_form=cv, closed_form_err=cerr, closed_vs_laplace=gap)
        flags.add(TYPO_LEDGER_APPLIED)
        flags.add(CLOSED_FORM_AGREES if gap <= 2.0 * (cerr + est.err_estimate) + 1e-12
                  else CLOSED_FORM_DISCREPANCY)
    if 2.0 * c.lam + 1.0 < 0.0:
        diag["residue"] = gbm_residue(c, q.r)
    return finish(float(est.value), est.err_estimate, m_enum, flags, diag)
