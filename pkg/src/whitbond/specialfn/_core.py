"""Shared plumbing for the special-function kernels."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number

from ..errors import DomainError

EPS = 2.220446049250313e-16

POLE_GUARD = 1e-8
MU_INTEGER_GUARD = 1e-6
SERIES_RADIUS = 40.0

# series stop: |term| < TERM_RTOL * |sum| for STOP_RUN consecutive terms
TERM_RTOL = 1e-17
STOP_RUN = 5
MAX_TERMS = 20000


@dataclass(frozen=True)
class FnResult:
    """Value of a special function with an error estimate.

    ``value`` is a Python ``complex`` unless the imaginary part is zero by
    construction, in which case it is a ``float``.
    """

    value: complex | float
    abs_err: float
    terms_used: int

    def __post_init__(self):
        if not self.abs_err >= 0.0:
            raise ValueError("abs_err must be nonnegative")
        if self.terms_used < 1:
            raise ValueError("terms_used must be at least 1")

    @property
    def real(self) -> float:
        return float(self.value.real)

    def __float__(self) -> float:
        if isinstance(self.value, complex) and self.value.imag != 0.0:
            raise TypeError("complex FnResult has nonzero imaginary part")
        return float(self.value.real)

    def __complex__(self) -> complex:
        return complex(self.value)


def as_complex(z, name: str = "z") -> complex:
    if not isinstance(z, Number):
        raise TypeError(f"{name} must be a number, got {type(z).__name__}")
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return w


def as_real(x, name: str = "x") -> float:
    if isinstance(x, complex):
        if x.imag != 0.0:
            raise DomainError(f"{name} must be real, got {x!r}")
        x = x.real
    v = float(x)
    if math.isnan(v):
        raise DomainError(f"{name} is NaN")
    return v


def is_real(z: complex) -> bool:
    return z.imag == 0.0


def near_nonpositive_integer(z: complex, guard: float = POLE_GUARD) -> bool:
    if abs(z.imag) > guard or z.real > guard:
        return False
    return abs(z.real - round(z.real)) <= guard


def real_view(z: complex) -> complex | float:
    return z.real if z.imag == 0.0 else z


class KahanSum:
    """Compensated accumulator for real or complex terms."""

    __slots__ = ("total", "comp", "abs_total")

    def __init__(self, start=0.0):
        self.total = start
        self.comp = 0.0 * start
        self.abs_total = abs(start)

    def add(self, term):
        y = term - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t
        self.abs_total += abs(term)
        return t


def sum_series(first, ratio, max_terms: int = MAX_TERMS):
    """Sum ``t_0 + t_1 + ...`` with ``t_{k+1} = t_k * ratio(k)``.

    Returns ``(sum, sum_of_abs_terms, n_terms)``. Stops once the relative
    term size stays below ``TERM_RTOL`` for ``STOP_RUN`` consecutive terms.
    """
    acc = KahanSum(first)
    term = first
    run = 0
    for k in range(max_terms):
        term = term * ratio(k)
        acc.add(term)
        if abs(term) <= TERM_RTOL * abs(acc.total):
            run += 1
            if run >= STOP_RUN:
                return acc.total, acc.abs_total, k + 2
        else:
            run = 0
        if term == 0:
            return acc.total, acc.abs_total, k + 2
    from ..errors import ConvergenceError

    raise ConvergenceError(f"series failed to converge in {max_terms} terms")


def clog(z: complex) -> complex:
    return cmath.log(z)
