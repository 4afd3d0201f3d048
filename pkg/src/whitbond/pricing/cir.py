"""Cox-Ingersoll-Ross closed form.

With ``s = 1/sqrt(alpha^2 + 2 beta^2)`` and
``D = (1 + alpha s) e^{-tau/s} - alpha s + 1``,

``log P = (2 gamma/beta^2) log(2 e^{-tau/(2s)}/D) - alpha gamma tau/beta^2
+ (alpha^2 s^2 - 1)(1 - e^{-tau/s}) r / (beta^2 s D)``.

The middle term carries the factor ``gamma``; without it the formula
violates the affine Riccati system it must solve. For ``beta = 0`` the rate
path is deterministic and ``log P = -int_0^tau r(u) du`` exactly.
"""

from __future__ import annotations

import math

from ..models import CIR, PricingQuery
from ._types import TYPO_LEDGER_APPLIED, Method, PriceEstimate, boundary_estimate, finish

EPS = 2.220446049250313e-16


def _deterministic_log_price(a: float, g: float, r: float, t: float) -> tuple[float, float]:
    # r(u) solves r' = a r + g, so log P = -int_0^t r = B r + A with
    # B = -(e^{a t} - 1)/a and A = -g (e^{a t} - 1 - a t)/a^2
    at = a * t
    if abs(at) < 1e-5:
        b_ = -t * (1.0 + at / 2.0 + at * at / 6.0)
        a_ = -g * t * t / 2.0 * (1.0 + at / 3.0 + at * at / 12.0)
    else:
        b_ = -math.expm1(at) / a
        a_ = -g * (math.expm1(at) - at) / (a * a)
    lv = a_ + b_ * r
    return lv, 4.0 * EPS * (abs(a_) + abs(b_ * r))


def cir_log_price(model: CIR, q: PricingQuery) -> tuple[float, float]:
    """``(log P, absolute error bound of log P)``.

    With ``c = 1/s``, ``p = c + alpha`` and ``m = c - alpha`` (so ``p m =
    2 beta^2``) the closed form rearranges to

    ``log P = -(2 gamma/beta^2) log1p(m expm1(tau p/2)/(2c) + p expm1(-tau m/2)/(2c))
    - 2 r (1 - e^{-c tau})/(c D)``,  ``D = (p e^{-c tau} + m)/c``,

    which avoids the cancellation of the printed form as ``beta -> 0``.
    """
    a, b, g = model.alpha, model.beta, model.gamma
    t = q.tau
    if b == 0.0:
        return _deterministic_log_price(a, g, q.r, t)
    c = math.sqrt(a * a + 2.0 * b * b)
    # form the non-cancelling one of c +- alpha directly
    if a <= 0.0:
        m = c - a
        p = 2.0 * b * b / m
    else:
        p = c + a
        m = 2.0 * b * b / p
    f = math.log1p((m * math.expm1(0.5 * t * p) + p * math.expm1(-0.5 * t * m)) / (2.0 * c))
    d = (p * math.exp(-c * t) + m) / c
    parts = (-2.0 * g / (b * b) * f, -2.0 * q.r * (-math.expm1(-c * t)) / (c * d))
    return math.fsum(parts), 8.0 * EPS * sum(abs(x) for x in parts)


def price_cir(model: CIR, q: PricingQuery) -> PriceEstimate:
    """Bond price under ``dr = (alpha r + gamma) dt + beta sqrt(r) dW``."""
    if q.tau == 0.0:
        return boundary_estimate(Method.CIR_AFFINE)
    lv, err = cir_log_price(model, q)
    v = math.exp(lv)
    return finish(v, v * (err + EPS), Method.CIR_AFFINE, {TYPO_LEDGER_APPLIED})
