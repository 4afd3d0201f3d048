"""Whittaker functions M and W of real indices and positive argument.

``M_{lam,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu-lam+1/2, 1+2mu, z)`` and
``W_{lam,mu}(z) = e^{-z/2} z^{mu+1/2} U(mu-lam+1/2, 1+2mu, z)``.

W uses the Gamma-weighted combination of ``M_{lam,mu}`` and ``M_{lam,-mu}``
only for small ``z`` and ``2 mu`` safely away from an integer; everywhere
else it goes through ``U`` (integral, loop or polynomial representation),
which has no trouble at integer ``2 mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError, ValidationError
from ._core import EPS, MU_INTEGER_GUARD, FnResult, as_real
from .kummer import _log_kummer_m, _log_u, _u_connection


@dataclass(frozen=True)
class WhittakerIndex:
    """Index pair ``(lambda, mu)`` of the Whittaker equation.

    ``mu >= 0`` by convention; the companion ``M_{lam,-mu}`` is reached with
    ``whittaker_m(idx, z, companion=True)``.
    """

    lam: float
    mu: float

    def __post_init__(self):
        for name in ("lam", "mu"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"WhittakerIndex.{name} must be a finite real")
        if self.mu < 0.0:
            raise ValidationError("WhittakerIndex.mu must be nonnegative")

    @property
    def kummer_a(self) -> float:
        return self.mu - self.lam + 0.5

    @property
    def kummer_b(self) -> float:
        return 1.0 + 2.0 * self.mu

    def near_integer_2mu(self, guard: float = MU_INTEGER_GUARD) -> bool:
        return abs(2.0 * self.mu - round(2.0 * self.mu)) <= guard


def _index(idx) -> WhittakerIndex:
    if isinstance(idx, WhittakerIndex):
        return idx
    lam, mu = idx
    return WhittakerIndex(float(lam), float(mu))


def _check_z(z) -> float:
    z = as_real(z, "z")
    if not z > 0.0:
        raise DomainError("Whittaker functions require z > 0")
    return z


def log_whittaker_m(idx, z, *, companion: bool = False) -> FnResult:
    """``log M_{lam,mu}(z)`` (complex when M is negative: imaginary part pi)."""
    ix = _index(idx)
    z = _check_z(z)
    mu = -ix.mu if companion else ix.mu
    b = 1.0 + 2.0 * mu
    if b <= 0.0 and b == math.floor(b):
        raise DomainError("companion M_{lam,-mu} undefined for this mu")
    lm, rel, n = _log_kummer_m(mu - ix.lam + 0.5, b, z)
    lv = complex(lm) + (mu + 0.5) * math.log(z) - 0.5 * z
    err = rel + EPS * (128.0 + 8.0 * abs(lv))
    if lv.imag == 0.0:
        return FnResult(lv.real, err, n)
    return FnResult(lv, err, n)


def whittaker_m(idx, z, *, companion: bool = False) -> FnResult:
    """Whittaker ``M_{lam,mu}(z)`` for ``z > 0``.

    Parameters
    ----------
    idx : WhittakerIndex or (lam, mu)
    z : float
    companion : bool
        Evaluate ``M_{lam,-mu}`` instead.
    """
    r = log_whittaker_m(idx, z, companion=companion)
    lv = complex(r.value)
    if lv.real > 709.7:
        raise OverflowError("M_{lam,mu}(z) overflows; use log_whittaker_m")
    mag = math.exp(lv.real)
    v = -mag if abs(lv.imag) > 1.0 else mag
    return FnResult(v, mag * r.abs_err, r.terms_used)


def _w_combination(ix: WhittakerIndex, z: float):
    # W = e^{-z/2} z^{mu+1/2} U(a, b, z) with U from two M functions
    a, b = ix.kummer_a, ix.kummer_b
    u, err = _u_connection(a, b, z)
    pre = math.exp(-0.5 * z + (ix.mu + 0.5) * math.log(z))
    return u.real * pre, err * pre


def log_whittaker_w(idx, z) -> tuple[float, float, float]:
    """``(log|W|, sign, rel_err)`` for ``z > 0``."""
    ix = _index(idx)
    z = _check_z(z)
    lu, sign, rel, _ = _log_u(ix.kummer_a, ix.kummer_b, z)
    lv = lu + (ix.mu + 0.5) * math.log(z) - 0.5 * z
    return lv, sign, rel + EPS * (128.0 + 8.0 * abs(lv))


def whittaker_w(idx, z, *, mu_integer_guard: float = MU_INTEGER_GUARD) -> FnResult:
    """Whittaker ``W_{lam,mu}(z)`` for ``z > 0``."""
    ix = _index(idx)
    z = _check_z(z)
    if z <= 1.0 and not ix.near_integer_2mu(mu_integer_guard) and ix.mu < 20.0:
        try:
            v, err = _w_combination(ix, z)
        except (OverflowError, DomainError):
            v, err = 0.0, math.inf
        if v != 0.0 and err <= 1e-12 * abs(v):
            return FnResult(v, err + 64.0 * EPS * abs(v), 2)
    a, b = ix.kummer_a, ix.kummer_b
    lu, sign, rel, n = _log_u(a, b, z)
    if sign == 0.0:
        return FnResult(0.0, EPS, n)
    lv = lu + (ix.mu + 0.5) * math.log(z) - 0.5 * z
    if lv > 709.7:
        raise OverflowError("W_{lam,mu}(z) overflows; use log_whittaker_w")
    v = sign * math.exp(lv)
    return FnResult(v, abs(v) * (rel + EPS * (128.0 + 8.0 * abs(lv))), n)
