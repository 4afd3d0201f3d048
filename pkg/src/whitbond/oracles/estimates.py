"""Oracle results wrapped as :class:`~whitbond.pricing.PriceEstimate`."""

from __future__ import annotations

import math

from ..errors import ValidationError
from ..models import CIR, PricingQuery, ShortRateModel
from ..pricing._types import BOUNDARY, Method, PriceEstimate, boundary_estimate, finish
from .mc import McConfig, mc_price
from .pde import PdeConfig, pde_richardson
from .riccati import RK4_STEPS, riccati_cir

PATHS_CAPPED = "PATHS_CAPPED"
EPS = 2.220446049250313e-16


def mc_estimate(model: ShortRateModel, q: PricingQuery, cfg: McConfig | None = None) -> PriceEstimate:
    """Monte Carlo price; ``err_estimate`` is the standard error."""
    if q.tau == 0.0:
        return boundary_estimate(Method.MC)
    cfg = cfg or McConfig()
    e = mc_price(model, q, cfg)
    flags = {PATHS_CAPPED} if e.paths_capped else set()
    return finish(e.mean, e.std_error, Method.MC, flags,
                  {"paths_capped": e.paths_capped, "n_paths": cfg.n_paths, "n_steps": cfg.n_steps})


def pde_estimate(model: ShortRateModel, q: PricingQuery, cfg: PdeConfig | None = None) -> PriceEstimate:
    """Richardson-extrapolated Crank-Nicolson price."""
    if q.tau == 0.0:
        return PriceEstimate(1.0, 0.0, Method.PDE, frozenset({BOUNDARY}))
    v, err = pde_richardson(model, q, cfg)
    return finish(v, err, Method.PDE)


def riccati_estimate(model: CIR, q: PricingQuery) -> PriceEstimate:
    """``exp(A + B r)`` from the RK4 Riccati solution; error from halving the step count."""
    if not isinstance(model, CIR):
        raise ValidationError("the Riccati oracle applies to CIR only")
    if q.tau == 0.0:
        return boundary_estimate(Method.RICCATI)
    a, b = riccati_cir(model, q.tau)
    a2, b2 = riccati_cir(model, q.tau, RK4_STEPS // 2)
    lv, lv2 = a + b * q.r, a2 + b2 * q.r
    v = math.exp(lv)
    # RK4 error ~ h^4: the half-step run overstates it by 16
    err = v * (abs(lv - lv2) / 15.0 + 8.0 * EPS * (1.0 + abs(lv)))
    return finish(v, err, Method.RICCATI)
