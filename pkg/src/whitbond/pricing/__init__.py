"""Closed-form bond prices for the six short-rate models."""

from __future__ import annotations

from ..errors import ValidationError
from ..models import CI, CIR, CIR_VR, GBM, GCIR, ModifiedCI, PricingQuery, ShortRateModel, derive_constants
from ..quadrature import QuadratureSpec
from ._types import (
    ASYMPTOTIC_SERIES,
    BOUNDARY,
    CLIPPED_TO_ONE,
    CLOSED_FORM_AGREES,
    CLOSED_FORM_DISCREPANCY,
    CLOSED_FORM_UNAVAILABLE,
    CROSS_FORM_CHECKED,
    DEGENERATE_SMALL_RT,
    IMAGE_CANCELLATION,
    LARGE_RT,
    NEAR_BRANCH,
    TAIL_TRUNCATED,
    TYPO_LEDGER_APPLIED,
    Method,
    PriceEstimate,
)
from .ci import appendix_a_root, ci_whittaker_kernel, price_ci_appendixA, price_ci_integral, \
    price_ci_whittaker, price_cir_vr
from .cir import cir_log_price, price_cir
from .gbm import branch_point, gbm_closed_form, gbm_laplace_image, gbm_residue, price_gbm
from .gcir import price_gcir
from .modci import modci_correction, modci_leading_term, price_modified_ci

# closed-form routes per model; the first entry is the default
PRICING_METHODS = {
    "ci": ("whittaker", "integral"),
    "cirvr": ("whittaker", "integral"),
    "gbm": ("laplace", "closed"),
    "gcir": ("whittaker",),
    "cir": ("closed",),
    "modci": ("integral",),
}


def price(model: ShortRateModel, q: PricingQuery, method: str | None = None,
          spec: QuadratureSpec | None = None) -> PriceEstimate:
    """Price with one of the model's closed-form routes.

    Parameters
    ----------
    model : ShortRateModel
    q : PricingQuery
    method : str, optional
        One of ``PRICING_METHODS[model.name]``; defaults to the first.
    spec : QuadratureSpec, optional

    Raises
    ------
    ValidationError
        Unknown method for the model.
    """
    allowed = PRICING_METHODS[model.name]
    method = method or allowed[0]
    if method not in allowed:
        raise ValidationError(f"method {method!r} not available for {model.name}; choose from {allowed}")
    if isinstance(model, CI):
        c = derive_constants(model)
        return price_ci_whittaker(c, q) if method == "whittaker" else price_ci_integral(c, q, spec)
    if isinstance(model, CIR_VR):
        if method == "whittaker":
            return price_cir_vr(model, q, spec, form="both")
        return price_cir_vr(model, q, spec, form="integral")
    if isinstance(model, GBM):
        return price_gbm(model, q, spec, method=method)
    if isinstance(model, GCIR):
        return price_gcir(model, q)
    if isinstance(model, CIR):
        return price_cir(model, q)
    if isinstance(model, ModifiedCI):
        return price_modified_ci(model, q, spec)
    raise ValidationError(f"unsupported model {model!r}")


__all__ = [
    "Method",
    "PriceEstimate",
    "PRICING_METHODS",
    "price",
    "price_ci_integral",
    "price_ci_whittaker",
    "price_ci_appendixA",
    "appendix_a_root",
    "ci_whittaker_kernel",
    "price_cir_vr",
    "gbm_laplace_image",
    "gbm_closed_form",
    "gbm_residue",
    "branch_point",
    "price_gbm",
    "price_gcir",
    "price_cir",
    "cir_log_price",
    "price_modified_ci",
    "modci_leading_term",
    "modci_correction",
    "TAIL_TRUNCATED",
    "NEAR_BRANCH",
    "TYPO_LEDGER_APPLIED",
    "BOUNDARY",
    "DEGENERATE_SMALL_RT",
    "LARGE_RT",
    "ASYMPTOTIC_SERIES",
    "CLIPPED_TO_ONE",
    "CLOSED_FORM_AGREES",
    "CLOSED_FORM_DISCREPANCY",
    "CLOSED_FORM_UNAVAILABLE",
    "CROSS_FORM_CHECKED",
    "IMAGE_CANCELLATION",
]
