"""Geometric CIR prices through the CI Whittaker kernel.

The substitution ``x = r (e^{gamma tau} - 1)/gamma`` maps the geometric CIR
problem onto the CI one, so the price is the CI Whittaker form at that
``x`` with the model's ``alpha`` and ``beta``.
"""

from __future__ import annotations

from ..models import GCIR, PricingQuery, derive_constants, gcir_time_change
from ._types import TYPO_LEDGER_APPLIED, Method, PriceEstimate, boundary_estimate, finish
from .ci import ci_whittaker_kernel


def price_gcir(model: GCIR, q: PricingQuery) -> PriceEstimate:
    """Bond price under ``dr = (alpha r^2 + gamma r) dt + beta r^{3/2} dW``."""
    if q.tau == 0.0 or q.r == 0.0:
        return boundary_estimate(Method.GCIR_WHITTAKER)
    c = derive_constants(model)
    x = gcir_time_change(model, q)
    v, err, flags = ci_whittaker_kernel(c.lam, c.mu, model.beta, x)
    return finish(v, err, Method.GCIR_WHITTAKER, set(flags) | {TYPO_LEDGER_APPLIED}, {"x": x})
