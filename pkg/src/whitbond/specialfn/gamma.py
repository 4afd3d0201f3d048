"""Complex Gamma, log-Gamma and reciprocal Gamma.

Real arguments go through :func:`math.gamma` / :func:`math.lgamma`. Complex
arguments use a Lanczos sum (g=7, n=9) near the origin and a Stirling series
with upward shift, and reflection far into the left half-plane.
"""

from __future__ import annotations

import cmath
import math

from ..errors import PoleError
from ._core import (
    EPS,
    POLE_GUARD,
    FnResult,
    as_complex,
    near_nonpositive_integer,
)

_G = 7.0
_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# B_{2k} / (2k (2k-1))
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 10.0
_SHIFT_LIMIT = 2000.0


def _check_pole(z: complex, pole_guard: float) -> None:
    if near_nonpositive_integer(z, pole_guard):
        raise PoleError(f"Gamma has a pole near {z!r}")


def _stirling_loggamma(z: complex) -> complex:
    # summing log(z+k) term by term keeps the principal continuation
    shift = 0.0 + 0.0j
    while z.real < 0.0 or abs(z) < _STIRLING_MIN:
        shift += cmath.log(z)
        z += 1.0
    zi = 1.0 / z
    zi2 = zi * zi
    s = 0.0 + 0.0j
    p = zi
    for c in _STIRLING:
        s += c * p
        p *= zi2
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + s - shift


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)) without overflow for large |Im z|."""
    y = z.imag
    if abs(y) < 20.0:
        return cmath.log(cmath.sin(math.pi * z))
    # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i ; dominant term by sign of y
    if y > 0:
        # e^{-i pi z} dominates: sin = -e^{-i pi z}(1 - e^{2 i pi z}) / 2i
        w = -1j * math.pi * z
        corr = cmath.log(1.0 - cmath.exp(2j * math.pi * z))
        return w + corr - cmath.log(-2j)
    w = 1j * math.pi * z
    corr = cmath.log(1.0 - cmath.exp(-2j * math.pi * z))
    return w + corr - cmath.log(2j)


def _loggamma_complex(z: complex) -> complex:
    if z.real < -_SHIFT_LIMIT:
        # reflection, then restore continuity off the cut
        v = _LOG_PI - _log_sin_pi(z) - _stirling_loggamma(1.0 - z)
        return _fix_branch(v, z)
    return _stirling_loggamma(z)


def _fix_branch(v: complex, z: complex) -> complex:
    # pick the multiple of 2 pi i nearest the Stirling phase estimate
    est = ((z - 0.5) * cmath.log(z) - z).imag
    n = round((est - v.imag) / (2.0 * math.pi))
    return v + 2j * math.pi * n


def _lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z -= 1.0
    x = _P[0]
    for i in range(1, 9):
        x += _P[i] / (z + i)
    t = z + _G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def _gamma_complex(z: complex) -> complex:
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _gamma_complex(1.0 - z))
    if abs(z) < _STIRLING_MIN:
        return _lanczos(z)
    return cmath.exp(_stirling_loggamma(z))


def gamma(z, *, pole_guard: float = POLE_GUARD) -> FnResult:
    """Gamma function for real or complex argument.

    Raises
    ------
    PoleError
        If ``z`` lies within ``pole_guard`` of a nonpositive integer.
    """
    w = as_complex(z)
    _check_pole(w, pole_guard)
    if w.imag == 0.0:
        x = w.real
        try:
            v = math.gamma(x)
        except OverflowError:
            v = math.inf
        return FnResult(v, 4.0 * EPS * abs(v) if math.isfinite(v) else math.inf, 1)
    if abs(w) < 100.0:
        v = _gamma_complex(w)
    else:
        v = cmath.exp(_loggamma_complex(w))
    # relative accuracy degrades with the condition of the exponentiation
    err = abs(v) * EPS * (16.0 + abs(w))
    return FnResult(v, err, 9)


def loggamma(z, *, pole_guard: float = POLE_GUARD) -> FnResult:
    """Principal-branch-free log-Gamma.

    For real positive ``z`` the result is the real ``lgamma``. For complex ``z``
    the imaginary part is continuous away from the negative real axis (it is
    the analytic continuation, not ``log`` of ``gamma``).
    """
    w = as_complex(z)
    _check_pole(w, pole_guard)
    if w.imag == 0.0 and w.real > 0.0:
        v = math.lgamma(w.real)
        return FnResult(v, 4.0 * EPS * max(1.0, abs(v)), 1)
    v = _loggamma_complex(w)
    return FnResult(v, EPS * (16.0 + abs(v) + abs(w)), 8)


def rgamma(z) -> FnResult:
    """Reciprocal Gamma, entire; zero at nonpositive integers."""
    w = as_complex(z)
    if w.imag == 0.0 and w.real <= 0.0 and w.real == round(w.real):
        return FnResult(0.0, 0.0, 1)
    if w.imag == 0.0:
        x = w.real
        if x > 171.0:
            return FnResult(math.exp(-math.lgamma(x)), EPS * 16.0 * math.exp(-math.lgamma(x)), 1)
        g = math.gamma(x)
        v = 1.0 / g
        return FnResult(v, 4.0 * EPS * abs(v), 1)
    if abs(w) > 100.0:
        v = cmath.exp(-_loggamma_complex(w))
    elif w.real < 0.5:
        # 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi, avoids the pole division
        v = cmath.sin(math.pi * w) * _gamma_complex(1.0 - w) / math.pi
    elif abs(w) < 170.0:
        v = 1.0 / _gamma_complex(w)
    else:
        v = cmath.exp(-_loggamma_complex(w))
    return FnResult(v, abs(v) * EPS * (16.0 + abs(w)), 9)


def gamma_c(z: complex) -> complex:
    """Fast unguarded complex Gamma for internal use."""
    if z.imag == 0.0:
        return complex(math.gamma(z.real))
    return _gamma_complex(z)


def loggamma_c(z: complex) -> complex:
    """Fast unguarded complex log-Gamma for internal use."""
    if z.imag == 0.0 and z.real > 0.0:
        return complex(math.lgamma(z.real))
    return _loggamma_complex(z)


def rgamma_c(z: complex) -> complex:
    return complex(rgamma(z).value)
