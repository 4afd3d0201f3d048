"""Result type and shared helpers of the bond pricers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..errors import EvaluationError


class Method(str, enum.Enum):
    """Pricing route that produced a :class:`PriceEstimate`."""

    CI_INTEGRAL = "ci_integral"
    CI_WHITTAKER = "ci_whittaker"
    CI_APPENDIX_A = "ci_appendixA"
    CIRVR_INTEGRAL = "cirvr_integral"
    CIRVR_WHITTAKER = "cirvr_whittaker"
    GBM_CLOSED = "gbm_closed"
    GBM_LAPLACE = "gbm_laplace"
    GCIR_WHITTAKER = "gcir_whittaker"
    CIR_AFFINE = "cir_affine"
    MODCI_INTEGRAL = "modci_integral"
    MC = "mc"
    PDE = "pde"
    RICCATI = "riccati"


# diagnostic markers carried in PriceEstimate.flags
TAIL_TRUNCATED = "TAIL_TRUNCATED"
NEAR_BRANCH = "NEAR_BRANCH"
TYPO_LEDGER_APPLIED = "TYPO_LEDGER_APPLIED"
BOUNDARY = "BOUNDARY"
DEGENERATE_SMALL_RT = "DEGENERATE_SMALL_RT"
LARGE_RT = "LARGE_RT"
ASYMPTOTIC_SERIES = "ASYMPTOTIC_SERIES"
CLIPPED_TO_ONE = "CLIPPED_TO_ONE"
CLOSED_FORM_AGREES = "CLOSED_FORM_AGREES"
CLOSED_FORM_DISCREPANCY = "CLOSED_FORM_DISCREPANCY"
CLOSED_FORM_UNAVAILABLE = "CLOSED_FORM_UNAVAILABLE"
CROSS_FORM_CHECKED = "CROSS_FORM_CHECKED"
IMAGE_CANCELLATION = "IMAGE_CANCELLATION"


@dataclass(frozen=True)
class PriceEstimate:
    """Zero-coupon bond price with its error estimate and provenance.

    Attributes
    ----------
    price : float
        Value in ``(0, 1]``.
    err_estimate : float
        Absolute error estimate (standard error for Monte Carlo).
    method : Method
    flags : frozenset of str
        Diagnostic markers such as ``TAIL_TRUNCATED``.
    diagnostics : dict
        Free-form numbers behind the flags (not part of equality).
    """

    price: float
    err_estimate: float
    method: Method
    flags: frozenset = frozenset()
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.price) and 0.0 < self.price <= 1.0):
            raise ValueError(f"price must lie in (0, 1], got {self.price!r}")
        if not self.err_estimate >= 0.0:
            raise ValueError("err_estimate must be >= 0")
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "flags", frozenset(self.flags))


def boundary_estimate(method: Method) -> PriceEstimate:
    """Exact ``P = 1`` on the ``tau = 0`` or ``r = 0`` boundary."""
    return PriceEstimate(1.0, 0.0, method, frozenset({BOUNDARY}))


def finish(value: float, err: float, method: Method, flags=(), diagnostics=None) -> PriceEstimate:
    """Wrap a computed value, clipping round-off excursions above 1.

    Raises
    ------
    EvaluationError
        The value is not finite or not positive.
    """
    flags = set(flags)
    diagnostics = dict(diagnostics or {})
    value = float(value)
    err = float(err)
    if not math.isfinite(value) or not math.isfinite(err):
        raise EvaluationError(f"{method.value}: non-finite result {value!r} +- {err!r}")
    if value == 0.0:
        raise EvaluationError(f"{method.value}: price underflows double precision")
    if value < 0.0:
        raise EvaluationError(f"{method.value}: non-positive price {value!r}")
    if value > 1.0:
        diagnostics["unclipped_price"] = value
        err = max(err, value - 1.0)
        value = 1.0
        flags.add(CLIPPED_TO_ONE)
    return PriceEstimate(value, err, method, frozenset(flags), diagnostics)
