"""Constantinides-Ingersoll bond prices and the variable-rate special case.

With ``x = r tau`` and ``z = 2/(beta^2 x)`` the price has two forms,

``P = Gamma(1/2+mu-lam)/Gamma(1/2+mu+lam) int_0^inf (t/2)^{2 lam}
e^{-beta^2 t^2 x/8} J_{2 mu}(t) dt``

``P = Gamma(1/2+mu-lam)/Gamma(1+2 mu) z^lam e^{-z/2} M_{lam,mu}(z)``,

so the price depends on ``r`` and ``tau`` only through their product.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..errors import ConvergenceError, NoConvergentRoot, ValidationError
from ..models import CI, CIR_VR, ModelConstants, PricingQuery, derive_constants
from ..quadrature import DecayHint, QuadratureSpec, integrate_oscillatory_bessel, integrate_semi_infinite
from ..specialfn import log_whittaker_m, loggamma
from ._types import (
    ASYMPTOTIC_SERIES,
    CROSS_FORM_CHECKED,
    DEGENERATE_SMALL_RT,
    LARGE_RT,
    TAIL_TRUNCATED,
    TYPO_LEDGER_APPLIED,
    Method,
    PriceEstimate,
    boundary_estimate,
    finish,
)

EPS = 2.220446049250313e-16
SMALL_RT = 1e-10
LARGE_RT_LIMIT = 1e6
# above this z the two-term expansion of M needs only its dominant part
_ASYM_Z = 200.0
_MAX_HALF_PERIODS = 1e5


def _lgamma(x: float) -> tuple[float, float]:
    r = loggamma(x)
    return float(r.value), r.abs_err


def _require_ci_constants(c: ModelConstants):
    if not isinstance(c.model, (CI, CIR_VR)):
        raise ValidationError("CI pricing needs constants of a CI or CIR_VR model")


def _asymptotic_price(lam: float, mu: float, z: float):
    """``sum_k (1/2+mu+lam)_k (1/2-mu+lam)_k / k! z^{-k}``, optimally truncated.

    Returns ``(value, err)`` or ``None`` when the series does not settle.
    """
    p, q = 0.5 + mu + lam, 0.5 - mu + lam
    term, total = 1.0, 1.0
    for k in range(200):
        nxt = term * (p + k) * (q + k) / ((k + 1) * z)
        if abs(nxt) > abs(term) and k > 0:
            return None
        term = nxt
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total, abs(term) + 4.0 * EPS * abs(total)
    return None


def ci_whittaker_kernel(lam: float, mu: float, beta: float, x: float):
    """Whittaker-form price at ``x = r tau`` (or its time-changed analogue).

    Returns ``(value, err, flags)``. The large-``z`` branch sums the
    asymptotic series of the normalised ``M`` directly; otherwise the
    logarithms of the Gamma prefactor, ``z^lam e^{-z/2}`` and ``M`` are
    added so nothing overflows.
    """
    flags = set()
    if x < SMALL_RT:
        # P = 1 - x + O(x^2) uniformly in the coefficients
        return 1.0, x, {DEGENERATE_SMALL_RT}
    if x > LARGE_RT_LIMIT:
        flags.add(LARGE_RT)
    z = 2.0 / (beta * beta * x)
    if z > _ASYM_Z:
        res = _asymptotic_price(lam, mu, z)
        if res is not None:
            flags.add(ASYMPTOTIC_SERIES)
            return res[0], res[1], flags
    la, ea = _lgamma(0.5 + mu - lam)
    lb, eb = _lgamma(1.0 + 2.0 * mu)
    lm = log_whittaker_m((lam, mu), z)
    log_m = complex(lm.value)
    if log_m.imag != 0.0:
        raise ValidationError("M_{lam,mu}(z) is negative; outside the CI parameter range")
    parts = (la, -lb, lam * math.log(z), -0.5 * z, log_m.real)
    lv = math.fsum(parts)
    rel = ea + eb + lm.abs_err + EPS * (4.0 + sum(abs(t) for t in parts))
    v = math.exp(lv)
    return v, v * rel, flags


def price_ci_whittaker(c: ModelConstants, q: PricingQuery) -> PriceEstimate:
    """Whittaker-``M`` form of the CI price.

    The Gamma factor in front is ``Gamma(1/2+mu-lam)``; this is the only
    normalisation that gives ``P -> 1`` as ``tau -> 0``.
    """
    _require_ci_constants(c)
    method = Method.CIRVR_WHITTAKER if isinstance(c.model, CIR_VR) else Method.CI_WHITTAKER
    if q.tau == 0.0 or q.r == 0.0:
        return boundary_estimate(method)
    x = q.r * q.tau
    v, err, flags = ci_whittaker_kernel(c.lam, c.mu, c.model.beta, x)
    flags = set(flags) | {TYPO_LEDGER_APPLIED}
    return finish(v, err, method, flags, {"x": x})


def price_ci_integral(c: ModelConstants, q: PricingQuery,
                      spec: QuadratureSpec | None = None) -> PriceEstimate:
    """Bessel-integral form of the CI price.

    The integrand ``(t/2)^{2 lam} e^{-beta^2 x t^2/8} J_{2 mu}(t)`` is
    integrated between consecutive zeros of ``J_{2 mu}`` until the Gaussian
    envelope bound of the remaining tail drops below the tail tolerance.
    """
    _require_ci_constants(c)
    spec = spec or QuadratureSpec()
    method = Method.CIRVR_INTEGRAL if isinstance(c.model, CIR_VR) else Method.CI_INTEGRAL
    if q.tau == 0.0 or q.r == 0.0:
        return boundary_estimate(method)
    x = q.r * q.tau
    if x < SMALL_RT:
        return finish(1.0, x, method, {DEGENERATE_SMALL_RT}, {"x": x})
    lam, mu, beta = c.lam, c.mu, c.model.beta
    rate = beta * beta * x / 8.0
    hint = DecayHint("gaussian", rate, power=2.0 * lam, amplitude=2.0 ** (-2.0 * lam))

    def g(t):
        return (0.5 * t) ** (2.0 * lam) * np.exp(-rate * t * t)

    la, ea = _lgamma(0.5 + mu - lam)
    lb, eb = _lgamma(0.5 + mu + lam)
    ratio = math.exp(la - lb)
    # one adaptive run per half-period of J; budget grows with their number
    n_half = hint.truncation_point(spec.truncation_tail_bound) / math.pi
    if n_half > _MAX_HALF_PERIODS:
        raise ConvergenceError(f"integral form needs ~{n_half:.3g} half-periods at r tau={x:g}; "
                               "use the Whittaker form")
    run_spec = replace(spec, max_panels=spec.max_panels + 8 * int(n_half))
    est = integrate_oscillatory_bessel(g, 2.0 * mu, run_spec, decay=hint)
    tail = hint.tail(est.truncated_at)
    flags = {TAIL_TRUNCATED} if tail > 0.5 * est.err_estimate else set()
    value = ratio * est.value
    err = ratio * est.err_estimate + abs(value) * (ea + eb + 4.0 * EPS)
    return finish(value, err, method, flags,
                  {"x": x, "truncated_at": est.truncated_at, "panels": est.panels_used})


def appendix_a_root(c: ModelConstants) -> float:
    """Characteristic root ``nu`` whose power integrand decays at infinity.

    The roots are ``(1/2 - alpha/beta^2) +- mu``; the integrand of the
    Appendix-A integral behaves like ``s^{nu + 2 alpha/beta^2 - 3}``.

    Raises
    ------
    NoConvergentRoot
        Neither root makes that exponent less than ``-1``.
    """
    k = c.model.alpha / c.model.beta ** 2
    for nu in (0.5 - k + c.mu, 0.5 - k - c.mu):
        if nu + 2.0 * k - 3.0 < -1.0:
            return nu
    raise NoConvergentRoot(f"no root with a decaying integrand for alpha/beta^2={k:g}")


def price_ci_appendixA(c: ModelConstants, q: PricingQuery,
                       spec: QuadratureSpec | None = None) -> float:
    """Unnormalised solution ``F(x)`` built on the power-kernel integral.

    ``F(x) = x^{2-2k} e^{-2/(beta^2 x)} int_0^inf s^{2 nu + 2k - 2}
    e^{-2/(beta^2 s)} (s + x)^{-1-nu} ds`` with ``k = alpha/beta^2`` and
    ``x = r tau``. The normalising constant is not part of the result.
    """
    _require_ci_constants(c)
    spec = spec or QuadratureSpec()
    x = q.r * q.tau
    if not x > 0.0:
        raise ValidationError("the Appendix-A solution needs r tau > 0")
    beta = c.model.beta
    k = c.model.alpha / beta ** 2
    nu = appendix_a_root(c)
    w = 2.0 / beta ** 2
    p = 2.0 * nu + 2.0 * k - 2.0

    def f(s):
        # e^{-w/s} underflows to 0 before s^p can overflow
        return s ** p * np.exp(-w / s) * (s + x) ** (-1.0 - nu)

    # for s >= x, (s + x)^{-1-nu} <= max(1, 2^{-1-nu}) s^{-1-nu}
    amp = max(1.0, 2.0 ** (-1.0 - nu))
    hint = DecayHint("algebraic", -(nu + 2.0 * k - 3.0), amplitude=amp, start=max(x, 1.0))
    peak = w / max(-p, 1e-3) if p < 0 else w
    breaks = sorted({b for b in (0.1 * peak, peak, 10.0 * peak, x) if b > 0})
    est = integrate_semi_infinite(f, spec, decay=hint, breakpoints=breaks)
    return x ** (2.0 - 2.0 * k) * math.exp(-w / x) * est.value


def price_cir_vr(model: CIR_VR, q: PricingQuery, spec: QuadratureSpec | None = None, *,
                 form: str = "both") -> PriceEstimate:
    """Variable-rate price (``alpha = 0``, so ``lam = -1``).

    ``form="both"`` evaluates the integral and Whittaker forms and returns the
    Whittaker value with the cross-form discrepancy added to the error;
    ``"integral"`` or ``"whittaker"`` return one form alone.
    """
    if form not in ("both", "integral", "whittaker"):
        raise ValidationError(f"unknown CIR_VR form {form!r}")
    c = derive_constants(model)
    if form == "integral":
        return price_ci_integral(c, q, spec)
    w = price_ci_whittaker(c, q)
    if form == "whittaker" or w.price == 1.0 and w.err_estimate == 0.0:
        return w
    i = price_ci_integral(c, q, spec)
    gap = abs(w.price - i.price)
    diag = dict(w.diagnostics, integral_price=i.price, cross_form_gap=gap)
    return PriceEstimate(w.price, w.err_estimate + gap, w.method,
                         w.flags | i.flags | {CROSS_FORM_CHECKED}, diag)
