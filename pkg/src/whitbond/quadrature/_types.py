"""Value types shared by the integrators."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import TailError, ValidationError

_KINDS = ("exponential", "gaussian", "algebraic")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets for the integrators.

    Attributes
    ----------
    rel_tol, abs_tol : float
        Target ``err <= max(abs_tol, rel_tol |I|)``.
    max_panels : int
        Panel budget of one adaptive Gauss-Kronrod run.
    truncation_tail_bound : float
        Upper bound accepted for the neglected tail of a semi-infinite range.
    talbot_nodes : int
        Nodes of the Talbot rule (even, at least 8).
    """

    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_panels: int = 2000
    truncation_tail_bound: float = 1e-12
    talbot_nodes: int = 48

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "truncation_tail_bound"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"QuadratureSpec.{name} must be a positive finite number")
        if not isinstance(self.max_panels, int) or self.max_panels < 1:
            raise ValidationError("QuadratureSpec.max_panels must be an integer >= 1")
        n = self.talbot_nodes
        if not isinstance(n, int) or n < 8 or n % 2:
            raise ValidationError("QuadratureSpec.talbot_nodes must be an even integer >= 8")

    def scaled(self, factor: float) -> "QuadratureSpec":
        """Copy with both tolerances multiplied by ``factor``."""
        return QuadratureSpec(self.rel_tol * factor, self.abs_tol * factor, self.max_panels,
                              self.truncation_tail_bound, self.talbot_nodes)


@dataclass(frozen=True)
class IntegralEstimate:
    """Result of a quadrature.

    ``truncated_at`` is the finite upper limit actually integrated to (the
    right end of the range for finite intervals).
    """

    value: float
    err_estimate: float
    panels_used: int
    truncated_at: float

    def __post_init__(self):
        if not self.err_estimate >= 0.0:
            raise ValueError("err_estimate must be >= 0")
        if not self.truncated_at > 0.0:
            raise ValueError("truncated_at must be > 0")


@dataclass(frozen=True)
class DecayHint:
    """Envelope ``|f(x)| <= amplitude * x^power * decay(x)`` for ``x >= start``.

    ``kind`` selects ``decay``: ``exp(-rate x)`` (exponential),
    ``exp(-rate x^2)`` (gaussian) or ``x^{-rate}`` (algebraic, ``rate > 1``,
    ``power`` ignored).
    """

    kind: str
    rate: float
    power: float = 0.0
    amplitude: float = 1.0
    start: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"DecayHint.kind must be one of {_KINDS}")
        for name in ("rate", "power", "amplitude", "start"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"DecayHint.{name} must be finite")
        if self.rate <= 0.0 or self.amplitude < 0.0:
            raise ValidationError("DecayHint needs rate > 0 and amplitude >= 0")

    def tail(self, t: float) -> float:
        """Upper bound on ``int_t^inf |f|``; ``inf`` when no bound applies."""
        if t <= 0.0 or t < self.start:
            return math.inf
        a, p, c = self.amplitude, self.power, self.rate
        if a == 0.0:
            return 0.0
        if self.kind == "algebraic":
            if c <= 1.0:
                return math.inf
            return a * t ** (1.0 - c) / (c - 1.0)
        # the log-derivative of x^p e^{-c x^q} is at most -kappa on [t, inf)
        pp = max(p, 0.0)
        if self.kind == "exponential":
            kappa = c - pp / t
            log_f = p * math.log(t) - c * t
        else:
            kappa = 2.0 * c * t - pp / t
            log_f = p * math.log(t) - c * t * t
        if kappa <= 0.0:
            return math.inf
        log_tail = math.log(a) + log_f - math.log(kappa)
        return math.inf if log_tail > 700.0 else math.exp(log_tail)

    def truncation_point(self, bound: float, lower: float = 0.0) -> float:
        """Smallest convenient ``T >= lower`` with ``tail(T) <= bound``."""
        lo = max(lower, self.start, 1e-300)
        if self.tail(lo) <= bound:
            return max(lo, 1e-300) if lo > 0 else 1.0
        hi = max(2.0 * lo, 1.0)
        while self.tail(hi) > bound:
            hi *= 2.0
            if hi > 1e15:
                raise TailError(f"no truncation point reaches tail bound {bound:g} for {self}")
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if self.tail(mid) <= bound:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-6 * hi:
                break
        return hi
