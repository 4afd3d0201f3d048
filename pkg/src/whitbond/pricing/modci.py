"""Modified CI model ``dr = alpha r^2 dt + beta r dW``.

The price is a Whittaker-``W`` leading term plus a double integral,

``P = Gamma(1+1/alpha) e^{-z/2} W_{-1/alpha,1/2}(z) + 2 C
int_1^inf int_1^inf (th^2-1)^{1/alpha-1} th^{-2/alpha} e^{-X}
sinh(pi u) K_{iu}(X) e^{-beta^2 tau xi^2/8} / xi  dxi dth``

with ``z = 2 alpha r/beta^2``, ``X = alpha r th^2/beta^2``,
``u = sqrt(xi^2-1)/2`` and ``C = 2 sqrt(2 r)/(sqrt(alpha) beta pi^{3/2})``.
The factor 2 in front of the correction is required for ``P(r, 0) = 1``
and for agreement with simulation.

Both integrals are taken in the variables ``xi^2 = 1 + s^2`` and
``th^2 = 1 + v^2``, which remove the square-root behaviour at ``xi = 1``
and ``th = 1``.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..models import ModifiedCI, PricingQuery
from ..errors import ConvergenceError
from ..quadrature import DecayHint, QuadratureSpec, integrate_2d
from ..specialfn import bessel_k, log_whittaker_w, loggamma
from ..specialfn.bessel import bessel_k_imag_array
from .ci import SMALL_RT
from ._types import DEGENERATE_SMALL_RT, NEAR_BRANCH, TYPO_LEDGER_APPLIED, Method, PriceEstimate, boundary_estimate, finish

EPS = 2.220446049250313e-16
BRANCH_GUARD = 1e-6
CORRECTION_FACTOR = 2.0
MAX_CANCELLATION = 1e-2


def modci_leading_term(model: ModifiedCI, r: float) -> tuple[float, float]:
    """``Gamma(1+1/alpha) e^{-z/2} W_{-1/alpha,1/2}(z)`` and its error."""
    a, b = model.alpha, model.beta
    z = 2.0 * a * r / (b * b)
    lw, sign, rel = log_whittaker_w((-1.0 / a, 0.5), z)
    lg = loggamma(1.0 + 1.0 / a)
    lv = float(lg.value) - 0.5 * z + lw
    v = sign * math.exp(lv)
    return v, abs(v) * (rel + lg.abs_err + EPS * (4.0 + abs(lv)))


def _inner_hint(a_xi: float, big_x: float, bound: float) -> DecayHint:
    # shifting the contour of K_{iu}(X) = int_0^inf e^{-X cosh t} cos(ut) dt to Im t = pi/2 - 1/u
    # gives |sinh(pi u) K_{iu}(X)| <= e^{pi u/2 + 1} K_0(X sin(1/u))/2, and with u = s/2 >= 2/pi,
    # K_0(z) <= sqrt(pi/(2z)) and sin(2/s) >= 4/(pi s) the s-integrand is at most
    # e pi / (2 sqrt(8X)) e^{-a} s^{-1/2} e^{pi s/4 - a s^2}
    amp = math.e * math.pi / (2.0 * math.sqrt(8.0 * big_x)) * math.exp(-a_xi)
    t = max(4.0 / math.pi, 1.25 * math.pi / (4.0 * a_xi))
    while True:
        hint = DecayHint("gaussian", a_xi - math.pi / (4.0 * t), power=-0.5, amplitude=amp, start=t)
        if hint.tail(t) <= bound:
            return hint
        t *= 1.1


def _log_inner_scale(a_xi: float) -> float:
    """Log of ``C`` with ``int |s-integrand| ds <= C / sqrt(X)``."""
    # s < 4/pi: |K_{iu}| <= K_0(X) <= sqrt(pi/(2X)); beyond: the envelope above, whose
    # exponent pi s/4 - a s^2 peaks at pi^2/(64 a)
    near = 2.0 / math.pi * math.sinh(2.0) * math.sqrt(math.pi / 2.0)
    log_far = (math.log(math.e * math.pi / (2.0 * math.sqrt(8.0)) * math.sqrt(math.pi / 4.0)
                        * math.sqrt(math.pi / a_xi)) + math.pi ** 2 / (64.0 * a_xi))
    hi, lo = max(log_far, math.log(near)), min(log_far, math.log(near))
    return -a_xi + hi + math.log1p(math.exp(lo - hi))


def modci_correction(model: ModifiedCI, q: PricingQuery, spec: QuadratureSpec | None = None):
    """Double-integral correction (already doubled).

    Returns ``(value, err, near_branch, panels)``. The s-integrand grows like
    ``e^{pi s/4}`` before the Gaussian damping takes over, so short maturities
    lose about ``pi^2/(64 a ln 10)`` digits to cancellation (``a = beta^2 tau/8``);
    that loss is added to the error estimate.
    """
    spec = spec or QuadratureSpec()
    a, b = model.alpha, model.beta
    x0 = a * q.r / (b * b)
    a_xi = b * b * q.tau / 8.0
    p = 1.0 / a
    near = [False]
    inner_bound = 0.1 * spec.truncation_tail_bound
    log_c = _log_inner_scale(a_xi)
    # outer factor <= th^{-2} e^{-X} and 1/sqrt(X) <= 1/(sqrt(x0) v)
    log_amp_v = math.log(math.sqrt(2.0)) + log_c - x0 - 0.5 * math.log(x0)
    if log_amp_v > 700.0:
        raise ConvergenceError(f"correction integral overflows at beta^2 tau/8 = {a_xi:.3g}")

    def f(s, v):
        th2 = 1.0 + v * v
        big_x = x0 * th2
        xi2 = 1.0 + s * s
        if np.any(s * s / (1.0 + np.sqrt(xi2)) < BRANCH_GUARD):
            near[0] = True
        k = bessel_k_imag_array(0.5 * s, big_x)
        # sinh(pi s/2) e^{-a xi^2} without the intermediate overflow of sinh
        damp = 0.5 * (np.exp(0.5 * math.pi * s - a_xi * xi2) - np.exp(-0.5 * math.pi * s - a_xi * xi2))
        inner = damp * k * s / xi2
        outer = v ** (2.0 * p - 1.0) * th2 ** (-p - 0.5) * math.exp(-big_x)
        return outer * inner

    def hint_s(v):
        return _inner_hint(a_xi, x0 * (1.0 + v * v), inner_bound)

    hint_v = DecayHint("gaussian", x0, power=-3.0, amplitude=math.exp(log_amp_v), start=1.0)
    # rounding in sums whose terms reach the L1 bound int th^{-2} e^{-X} C/sqrt(X) dv;
    # asking the integrators for less than this floor cannot succeed
    cancel = 64.0 * EPS * math.exp(log_c - x0) * 0.5 * math.pi / math.sqrt(x0)
    pref = CORRECTION_FACTOR * 2.0 * math.sqrt(2.0 * q.r) / (math.sqrt(a) * b * math.pi ** 1.5)
    if pref * cancel > MAX_CANCELLATION:
        raise ConvergenceError(
            f"correction integral too ill-conditioned at beta^2 tau/8 = {a_xi:.3g}: "
            f"rounding alone is {pref * cancel:.3g}")
    run_spec = replace(spec, abs_tol=max(spec.abs_tol, 10.0 * cancel))
    est = integrate_2d(f, run_spec, decay_x=hint_s, decay_y=hint_v)
    return pref * est.value, pref * (est.err_estimate + cancel), near[0], est.panels_used


def price_modified_ci(model: ModifiedCI, q: PricingQuery,
                      spec: QuadratureSpec | None = None) -> PriceEstimate:
    """Bond price: Whittaker leading term plus the doubled 2-D correction."""
    if q.tau == 0.0 or q.r == 0.0:
        return boundary_estimate(Method.MODCI_INTEGRAL)
    if q.r * q.tau < SMALL_RT:
        # 1 - P <= E int r dt = r tau (1 + O(r))
        return finish(1.0, 2.0 * q.r * q.tau, Method.MODCI_INTEGRAL, {DEGENERATE_SMALL_RT})
    lead, lead_err = modci_leading_term(model, q.r)
    corr, corr_err, near, panels = modci_correction(model, q, spec)
    flags = {TYPO_LEDGER_APPLIED}
    if near:
        flags.add(NEAR_BRANCH)
    return finish(lead + corr, lead_err + corr_err, Method.MODCI_INTEGRAL, flags,
                  {"leading_term": lead, "correction": corr, "panels": panels})
