"""Parameter containers for the six short-rate models.

All coefficients are per year, rates are continuously compounded and times
are in years.

=============  ===========================================
model          SDE
=============  ===========================================
CI             dr = a r^2 dt + b r^{3/2} dW
CIR_VR         dr = b r^{3/2} dW
GBM            dr = a r dt + b r dW
GCIR           dr = (a r^2 + g r) dt + b r^{3/2} dW
CIR            dr = (a r + g) dt + b r^{1/2} dW
ModifiedCI     dr = a r^2 dt + b r dW
=============  ===========================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import ValidationError


def _finite(name: str, v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"{name} must be a finite real number")
    return float(v)


def _positive_beta(obj):
    if _finite("beta", obj.beta) <= 0.0:
        raise ValidationError("beta must be > 0")


@dataclass(frozen=True)
class CI:
    """Constantinides-Ingersoll: ``dr = alpha r^2 dt + beta r^{3/2} dW``."""

    alpha: float
    beta: float
    name = "ci"

    def __post_init__(self):
        _finite("alpha", self.alpha)
        _positive_beta(self)


@dataclass(frozen=True)
class CIR_VR:
    """Variable-rate special case of CI with ``alpha = 0``."""

    beta: float
    name = "cirvr"

    @property
    def alpha(self) -> float:
        return 0.0

    def __post_init__(self):
        _positive_beta(self)


@dataclass(frozen=True)
class GBM:
    """Geometric Brownian motion short rate: ``dr = alpha r dt + beta r dW``."""

    alpha: float
    beta: float
    name = "gbm"

    def __post_init__(self):
        _finite("alpha", self.alpha)
        _positive_beta(self)


@dataclass(frozen=True)
class GCIR:
    """Geometric CIR: ``dr = (alpha r^2 + gamma r) dt + beta r^{3/2} dW``."""

    alpha: float
    beta: float
    gamma: float
    name = "gcir"

    def __post_init__(self):
        _finite("alpha", self.alpha)
        _positive_beta(self)
        if _finite("gamma", self.gamma) <= 0.0:
            raise ValidationError("GCIR needs gamma > 0")


@dataclass(frozen=True)
class CIR:
    """Cox-Ingersoll-Ross: ``dr = (alpha r + gamma) dt + beta r^{1/2} dW``.

    ``beta = 0`` gives a deterministic rate path, used as a degenerate
    reference case by the oracles.
    """

    alpha: float
    beta: float
    gamma: float
    name = "cir"

    def __post_init__(self):
        # beta = 0 is allowed here: the deterministic flow dr = (alpha r + gamma) dt
        _finite("alpha", self.alpha)
        if _finite("beta", self.beta) < 0.0:
            raise ValidationError("CIR needs beta >= 0")
        if _finite("gamma", self.gamma) < 0.0:
            raise ValidationError("CIR needs gamma >= 0")


@dataclass(frozen=True)
class ModifiedCI:
    """Modified CI: ``dr = alpha r^2 dt + beta r dW`` with ``alpha > 0``."""

    alpha: float
    beta: float
    name = "modci"

    def __post_init__(self):
        if _finite("alpha", self.alpha) <= 0.0:
            raise ValidationError("ModifiedCI needs alpha > 0")
        _positive_beta(self)


ShortRateModel = Union[CI, CIR_VR, GBM, GCIR, CIR, ModifiedCI]

_REGISTRY = {cls.name: cls for cls in (CI, CIR_VR, GBM, GCIR, CIR, ModifiedCI)}
MODEL_NAMES = tuple(_REGISTRY)


def make_model(name: str, alpha=None, beta=None, gamma=None) -> ShortRateModel:
    """Build a model from its short name and the coefficients it uses."""
    cls = _REGISTRY.get(name)
    if cls is None:
        raise ValidationError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")
    fields = {"alpha": alpha, "beta": beta, "gamma": gamma}
    needed = [f for f in cls.__dataclass_fields__]
    missing = [f for f in needed if fields[f] is None]
    if missing:
        raise ValidationError(f"model {name!r} needs {', '.join(missing)}")
    return cls(**{f: fields[f] for f in needed})


@dataclass(frozen=True)
class PricingQuery:
    """Spot short rate ``r`` (1/year) and time to maturity ``tau`` (years)."""

    r: float
    tau: float

    def __post_init__(self):
        if _finite("r", self.r) < 0.0:
            raise ValidationError("r must be >= 0")
        if _finite("tau", self.tau) < 0.0:
            raise ValidationError("tau must be >= 0")


@dataclass(frozen=True)
class ModelConstants:
    """Whittaker/Bessel constants of a model.

    ``lam``, ``mu``, ``sigma`` serve CI, CIR_VR, GBM, GCIR and ModifiedCI
    (``sigma = 2 sqrt 2 / beta``). For CIR ``sigma_cir = 1/sqrt(alpha^2 +
    2 beta^2)`` and ``mu_cir = gamma/beta^2 - 1/2`` are set and ``lam``,
    ``mu``, ``sigma`` are NaN.
    """

    model: ShortRateModel
    lam: float
    mu: float
    sigma: float
    sigma_cir: float = math.nan
    mu_cir: float = math.nan


def derive_constants(model: ShortRateModel) -> ModelConstants:
    """Constants of the model's Whittaker/Bessel reduction.

    For the ``r^{3/2}`` and geometric models ``lam = alpha/beta^2 - 1`` and
    ``mu^2 = (lam + 1/2)^2 + 2/beta^2``, written in the expanded form to
    keep ``mu^2 - (lam+1/2)^2 = 2/beta^2`` exact up to rounding.
    """
    if isinstance(model, CIR):
        q = model.alpha ** 2 + 2.0 * model.beta ** 2
        s = 1.0 / math.sqrt(q) if q > 0.0 else math.inf
        mu_cir = model.gamma / model.beta ** 2 - 0.5 if model.beta > 0.0 else math.inf
        return ModelConstants(model, math.nan, math.nan, math.nan, s, mu_cir)
    if not isinstance(model, (CI, CIR_VR, GBM, GCIR, ModifiedCI)):
        raise ValidationError(f"unsupported model {model!r}")
    a, b = model.alpha, model.beta
    k = a / b ** 2
    lam = k - 1.0
    mu = math.sqrt(0.25 + 2.0 / b ** 2 + k * k - k)
    return ModelConstants(model, lam, mu, 2.0 * math.sqrt(2.0) / b)


def drift_diffusion(model: ShortRateModel, r: float) -> tuple[float, float]:
    """``(a(r), b(r))`` of ``dr = a dt + b dW``; fractional powers use ``max(r, 0)``.

    ``r`` may be a float or a numpy array.
    """
    rp = np.maximum(r, 0.0)
    if isinstance(model, CI):
        return model.alpha * r * r, model.beta * rp ** 1.5
    if isinstance(model, CIR_VR):
        return 0.0, model.beta * rp ** 1.5
    if isinstance(model, GBM):
        return model.alpha * r, model.beta * r
    if isinstance(model, GCIR):
        return model.alpha * r * r + model.gamma * r, model.beta * rp ** 1.5
    if isinstance(model, CIR):
        return model.alpha * r + model.gamma, model.beta * np.sqrt(rp)
    if isinstance(model, ModifiedCI):
        return model.alpha * r * r, model.beta * r
    raise ValidationError(f"unsupported model {model!r}")


def gcir_time_change(model: GCIR, query: PricingQuery) -> float:
    """``x = r (e^{gamma tau} - 1)/gamma``, the CI-equivalent ``r tau``.

    Uses three Taylor terms of ``(e^{g t} - 1)/g`` when ``g t < 1e-6``.
    """
    g, t = model.gamma, query.tau
    gt = g * t
    if gt < 1e-6:
        factor = t * (1.0 + 0.5 * gt + gt * gt / 6.0)
    else:
        factor = math.expm1(gt) / g
    return query.r * factor
