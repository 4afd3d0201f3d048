"""Kummer's confluent hypergeometric functions M(a, b, z) and U(a, b, z).

``M`` (the confluent Phi) is summed as a power series with compensated
summation and dynamic rescaling, so real parameters work for any real ``z``
through the log-scaled entry point. Negative ``z`` goes through Kummer's
transformation ``M(a,b,z) = e^z M(b-a,b,-z)``. When the terms cancel badly
(``a < 0`` and large ``z``) the series is re-summed in extended precision
with :mod:`decimal`; for complex parameters the asymptotic expansion is
the fallback.

``U`` for real parameters and ``z > 0``:

* ``a > 0``: Laplace integral
  ``U = 1/Gamma(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt`` by an
  exp-sinh rule in log space, or the asymptotic series for large ``z``;
* ``a`` a nonpositive integer: Laguerre polynomial;
* other ``a < 0``: Hankel loop around ``t = 0`` through the saddle point of
  ``e^{-zt} t^{a-1}`` when ``z`` is large enough, otherwise the connection
  formula in terms of two ``M`` functions.
"""

from __future__ import annotations

import cmath
import decimal
import math

import numpy as np

from ..errors import ConvergenceError, DomainError, PoleError
from ._core import (
    EPS,
    POLE_GUARD,
    STOP_RUN,
    TERM_RTOL,
    FnResult,
    KahanSum,
    as_complex,
    as_real,
    near_nonpositive_integer,
)
from .gamma import loggamma_c

SERIES_Z_MAX = 60.0
_RESCALE = 1e200
_LOG_RESCALE = math.log(_RESCALE)
_MAX_TERMS = 200000
_REAL_ASYM_Z = 2000.0
# relative cancellation in the double series above which decimal is used
_LOSS_LIMIT = 1e4


def _is_nonpos_int(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


# ------------------------------------------------------------------ M


def _m_series_scaled(a, b, z):
    """Power series for M(a,b,z).

    Returns ``(mantissa, log_scale, sum_abs_mantissa, n)`` with
    ``M = mantissa * exp(log_scale)``; real or complex a, b.
    """
    acc = KahanSum(1.0 + 0.0j if isinstance(a, complex) or isinstance(b, complex) else 1.0)
    term = acc.total
    log_scale = 0.0
    run = 0
    k = 0
    while True:
        term = term * (a + k) * z / ((k + 1) * (b + k))
        acc.add(term)
        k += 1
        if term == 0:
            break
        # terms may grow before they shrink: only stop past the peak
        if abs(term) <= TERM_RTOL * abs(acc.total) and k > abs(a + 0j) and k > abs(z):
            run += 1
            if run >= STOP_RUN:
                break
        else:
            run = 0
        if abs(acc.total) > _RESCALE:
            acc.total /= _RESCALE
            acc.comp /= _RESCALE
            acc.abs_total /= _RESCALE
            term /= _RESCALE
            log_scale += _LOG_RESCALE
        if k > _MAX_TERMS:
            raise ConvergenceError("Kummer series exceeded its term budget")
    return acc.total, log_scale, acc.abs_total, k + 1


def _m_series_decimal(a: float, b: float, z: float, digits: int):
    """Series in extended precision; returns (log|M|, sign, n)."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.Emax = 10**8
        ctx.Emin = -(10**8)
        da, db, dz = decimal.Decimal(a), decimal.Decimal(b), decimal.Decimal(z)
        term = decimal.Decimal(1)
        s = decimal.Decimal(1)
        tol = decimal.Decimal(10) ** (-(digits - 2))
        k = 0
        while True:
            term = term * (da + k) * dz / ((k + 1) * (db + k))
            s += term
            k += 1
            if term == 0 or (abs(term) <= tol * abs(s) and k > abs(a) and k > abs(z)):
                break
            if k > _MAX_TERMS:
                raise ConvergenceError("Kummer series exceeded its term budget")
        if s == 0:
            return -math.inf, 0.0, k
        return float(abs(s).ln()), (1.0 if s > 0 else -1.0), k


def _asym_sum(p, q, w, max_terms=200):
    """sum_k (p)_k (q)_k / k! w^k with optimal truncation; returns (s, err, n, ok)."""
    term = 1.0 + 0.0j
    s = 1.0 + 0.0j
    prev = 1.0
    k = 0
    while k < max_terms:
        nxt = term * (p + k) * (q + k) * w / (k + 1)
        if abs(nxt) > prev and k > 1:
            return s, abs(term), k + 1, False
        k += 1
        term = nxt
        s += term
        prev = abs(term)
        if term == 0 or prev <= 1e-17 * abs(s):
            return s, prev, k + 1, True
    return s, prev, k + 1, False


def _log_m_asymptotic(a, b, z):
    """log M(a,b,z) for large positive z from the two-term expansion."""
    # M ~ Gamma(b)/Gamma(a) e^z z^{a-b} S1 + Gamma(b)/Gamma(b-a) z^{-a} cos(pi a) S2
    # (for real parameters the principal-branch average of (-z)^{-a})
    lg_b = loggamma_c(complex(b))
    ok = True
    out = None
    err_rel = 0.0
    n = 0
    if not near_nonpositive_integer(complex(a), 0.0):
        s1, e1, n1, ok1 = _asym_sum(b - a, 1.0 - a, 1.0 / z)
        out = lg_b - loggamma_c(complex(a)) + z + (a - b) * math.log(z) + cmath.log(s1)
        err_rel = abs(e1) / max(abs(s1), 1e-300)
        ok = ok1
        n += n1
    if not near_nonpositive_integer(complex(b - a), 0.0):
        s2, e2, n2, ok2 = _asym_sum(a, a - b + 1.0, -1.0 / z)
        log2 = (lg_b - loggamma_c(complex(b - a)) - a * math.log(z)
                + cmath.log(s2 * cmath.cos(math.pi * a)))
        n += n2
        if out is None:
            return log2, abs(e2) / max(abs(s2), 1e-300), n, ok2
        ratio = cmath.exp(log2 - out)
        out = out + cmath.log(1.0 + ratio)
        err_rel += abs(ratio) * abs(e2) / max(abs(s2), 1e-300)
        ok = ok and ok2
    if out is None:
        raise DomainError("degenerate asymptotic expansion")
    # principal branch of the logarithm
    out = complex(out.real, math.remainder(out.imag, 2.0 * math.pi))
    return out, err_rel, n, ok


def _log_kummer_m(a, b, z):
    """Return ``(log M as complex, rel_err, terms)`` for real z."""
    if z == 0.0:
        return 0.0j, 0.0, 1
    real = not isinstance(a, complex) and not isinstance(b, complex)
    if z < 0.0 and real:
        # Kummer transformation keeps the series sign-definite when b > a > 0
        la, rel, n = _log_kummer_m(b - a, b, -z)
        return la + z, rel + EPS * abs(z), n
    polynomial = near_nonpositive_integer(complex(a), 0.0)
    big = abs(z) > SERIES_Z_MAX and not real
    # real parameters keep the series (with its exact-arithmetic fallback)
    # until z dwarfs the parameters, where the expansion is fully converged
    big = big or (real and z > _REAL_ASYM_Z and z > 50.0 * (abs(a) + abs(b)) ** 2)
    if big and not polynomial:
        la, rel_a, n_a, ok = _log_m_asymptotic(a, b, z)
        if ok:
            return la, rel_a + 8.0 * EPS * (1.0 + abs(la.imag)), n_a
    mant, ls, sabs, n = _m_series_scaled(a, b, z)
    loss = sabs / abs(mant) if mant != 0 else math.inf
    rel = EPS * (4.0 + math.sqrt(n)) * loss
    if loss > _LOSS_LIMIT and real:
        digits = 30 + int(math.log10(max(sabs, 1.0)) + ls / math.log(10.0)) \
            if not math.isfinite(loss) else 30 + int(math.log10(loss))
        for _ in range(6):
            lv, sign, nd = _m_series_decimal(a, b, z, digits)
            # accept once the retained digits exceed the observed loss
            sum_log = math.log(max(sabs, 1e-300)) + ls
            lost = (sum_log - lv) / math.log(10.0) if math.isfinite(lv) else math.inf
            if lost < digits - 20:
                if sign == 0.0:
                    raise DomainError("M(a,b,z) vanishes; log undefined")
                v = lv + (0j if sign > 0 else 1j * math.pi)
                return v, 8.0 * EPS, nd
            digits = 30 + int(min(lost, 10 * digits)) + digits
        raise ConvergenceError("extended-precision Kummer series did not settle")
    if mant == 0:
        raise DomainError("M(a,b,z) vanishes; log undefined")
    return cmath.log(mant) + ls, rel, n


def _prep(a, b, pole_guard):
    ac = as_complex(a, "a")
    bc = as_complex(b, "b")
    if near_nonpositive_integer(bc, pole_guard):
        raise PoleError(f"b={b!r} is within pole_guard of a nonpositive integer")
    if ac.imag == 0.0 and bc.imag == 0.0:
        return ac.real, bc.real, True
    return ac, bc, False


def log_kummer_m(a, b, z, *, pole_guard: float = POLE_GUARD) -> FnResult:
    """``log M(a, b, z)``; complex-valued when ``M`` is negative or complex.

    ``abs_err`` is the absolute error of the logarithm, i.e. the relative
    error of ``M``.
    """
    a_, b_, real = _prep(a, b, pole_guard)
    z = as_real(z, "z")
    lv, rel, n = _log_kummer_m(a_, b_, z)
    lv = complex(lv)
    if real and lv.imag == 0.0:
        return FnResult(lv.real, rel, n)
    return FnResult(lv, rel, n)


def kummer_m(a, b, z, *, pole_guard: float = POLE_GUARD) -> FnResult:
    """Kummer's function ``M(a, b, z)`` (confluent Phi) for real ``z``.

    Raises
    ------
    PoleError
        ``b`` within ``pole_guard`` of a nonpositive integer.
    OverflowError
        Result beyond double range; use :func:`log_kummer_m`.
    """
    a_, b_, real = _prep(a, b, pole_guard)
    z = as_real(z, "z")
    if z == 0.0:
        return FnResult(1.0 if real else 1.0 + 0.0j, 0.0, 1)
    try:
        lv, rel, n = _log_kummer_m(a_, b_, z)
    except DomainError:
        return FnResult(0.0 if real else 0j, EPS, 1)
    lv = complex(lv)
    if lv.real > 709.7:
        raise OverflowError("M(a,b,z) overflows; use log_kummer_m")
    v = cmath.exp(lv)
    err = abs(v) * (rel + EPS * (2.0 + abs(lv)))
    if real:
        return FnResult(float(v.real), float(err), n)
    return FnResult(complex(v), float(err), n)


def kummer_m_c(a, b, z: float) -> complex:
    """Unguarded complex-valued M for internal use."""
    lv, _, _ = _log_kummer_m(a, b, z)
    return cmath.exp(lv)


# ------------------------------------------------------------------ U


def _exp_sinh_log(logf, lo_guess: float = -6.0, hi_guess: float = 6.0,
                  rtol: float = 1e-14):
    """Integrate exp(logf(s)) over the real line (s is the exp-sinh variable).

    Returns ``(log integral, rel_err, n_nodes)``. The step is halved until two
    successive trapezoid sums agree to ``rtol``.
    """
    s_grid = np.arange(lo_guess, hi_guess + 1e-12, 0.25)
    lf = logf(s_grid)
    peak = float(np.max(lf))
    lo, hi = lo_guess, hi_guess
    while float(logf(np.array([lo]))[0]) > peak - 60.0:
        lo -= 1.0
    while float(logf(np.array([hi]))[0]) > peak - 60.0:
        hi += 1.0
    keep = np.nonzero(lf > peak - 60.0)[0]
    if keep.size:
        lo = max(lo, s_grid[max(keep[0] - 1, 0)]) if s_grid[0] <= lo else lo
        hi = min(hi, s_grid[min(keep[-1] + 1, len(s_grid) - 1)]) if s_grid[-1] >= hi else hi
    h = 0.125
    s = np.arange(lo, hi + 0.5 * h, h)
    lf = logf(s)
    m = float(np.max(lf))
    total = float(np.sum(np.exp(lf - m))) * h
    n = s.size
    rel = math.inf
    while h > 1.0 / 512.0:
        mid = s[:-1] + 0.5 * h
        lf2 = logf(mid)
        m2 = max(m, float(np.max(lf2)))
        new = (total * math.exp(m - m2) + float(np.sum(np.exp(lf2 - m2))) * h) * 0.5
        rel = abs(new - total * math.exp(m - m2)) / new
        total, m = new, m2
        s = np.sort(np.concatenate([s, mid]))
        n = s.size
        h *= 0.5
        if rel < rtol:
            break
    return m + math.log(total), rel + EPS * (8.0 + math.sqrt(n)), n


def _log_u_integral(a: float, b: float, z: float):
    """log U(a,b,z) for a > 0, z > 0.

    ``U = z^{-a}/Gamma(a) int_0^inf e^{-u} u^{a-1} (1+u/z)^{b-a-1} du`` with
    ``u = exp(pi/2 sinh s)``.
    """
    c = b - a - 1.0

    def logf(s):
        lu = 0.5 * math.pi * np.sinh(s)
        u = np.exp(np.minimum(lu, 700.0))
        return -u + a * lu + c * np.log1p(u / z) + np.log(0.5 * math.pi * np.cosh(s))

    li, rel, n = _exp_sinh_log(logf)
    return -a * math.log(z) - math.lgamma(a) + li, rel, n


def _u_loop(a: float, b: float, z: float):
    """U for non-integer a < 0 from the Hankel loop through the saddle point.

    ``U = Gamma(1-a) [sin(pi a)/pi R + Re(e^{-i pi a} C / (2 pi i))]`` with
    ``R = int_rho^inf e^{-zt} t^{a-1}(1+t)^{b-a-1} dt`` and ``C`` the circle
    ``|t| = rho``. Returns ``(value, abs_err, n)``.
    """
    c = b - a - 1.0
    rho = min(0.5, (1.0 - a) / z)

    def logf(s):
        lu = 0.5 * math.pi * np.sinh(s)
        u = np.exp(np.minimum(lu, 700.0))
        t = rho + u
        return (-z * t + (a - 1.0) * np.log(t) + c * np.log1p(t)
                + np.log(0.5 * math.pi * np.cosh(s)) + lu)

    log_r, rel_r, n_r = _exp_sinh_log(logf)

    def circle(n):
        x, w = np.polynomial.legendre.leggauss(n)
        phi = math.pi * (x + 1.0)
        e = np.exp(1j * phi)
        lg = -z * rho * e + a * math.log(rho) + 1j * a * phi + c * np.log1p(rho * e)
        return complex(np.sum(w * math.pi * np.exp(lg))) * 1j

    n = 64
    cval = circle(n)
    while True:
        c2 = circle(2 * n)
        diff = abs(c2 - cval)
        cval = c2
        n *= 2
        if diff <= 1e-15 * abs(cval) or n >= 1024:
            break
    g = math.gamma(1.0 - a)
    t_r = math.sin(math.pi * a) / math.pi * math.exp(log_r)
    t_c = (cmath.exp(-1j * math.pi * a) * cval / (2j * math.pi)).real
    v = g * (t_r + t_c)
    scale = g * (abs(t_r) + abs(cval) / (2.0 * math.pi))
    err = scale * (8.0 * EPS + rel_r) + g * diff / (2.0 * math.pi)
    return v, err, n + n_r


def _u_connection(a, b, z: float):
    """U from two M functions; b must not be an integer.

    ``U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z)
          + Gamma(b-1)/Gamma(a) z^{1-b} M(a-b+1,2-b,z)``
    """
    from .gamma import rgamma

    def term(log_pref_gamma, rg, am, bm, extra_log):
        if rg == 0:
            return 0.0, 0.0
        lm, rel, _ = _log_kummer_m(am, bm, z)
        lv = log_pref_gamma + cmath.log(rg) + lm + extra_log
        v = cmath.exp(lv)
        # two Gamma factors each carry ~EPS*|log| of their own
        return v, abs(v) * (rel + EPS * (32.0 + 2.0 * abs(lv)))

    t1, e1 = term(loggamma_c(complex(1.0 - b)), complex(rgamma(a - b + 1.0).value), a, b, 0.0)
    t2, e2 = term(loggamma_c(complex(b - 1.0)), complex(rgamma(a).value),
                  a - b + 1.0, 2.0 - b, (1.0 - b) * cmath.log(z))
    v = t1 + t2
    return v, e1 + e2 + EPS * (abs(t1) + abs(t2))


def _u_connection_real(a: float, b: float, z: float):
    d = abs(b - round(b))
    if d > 1e-3:
        v, err = _u_connection(a, b, z)
        return v.real, err, 1
    # b near an integer: U is entire in b, so interpolate through real
    # Chebyshev nodes that stay clear of the integer
    n = 20
    half = 0.45
    k = np.arange(n)
    nodes = b + half * np.cos((2 * k + 1) * math.pi / (2 * n))
    vals = np.empty(n)
    errs = np.empty(n)
    for i, bi in enumerate(nodes):
        v, e = _u_connection(a, float(bi), z)
        vals[i] = v.real
        errs[i] = e
    # barycentric weights for Chebyshev points of the first kind
    w = (-1.0) ** k * np.sin((2 * k + 1) * math.pi / (2 * n))
    diff = b - nodes
    if np.any(diff == 0.0):
        i = int(np.nonzero(diff == 0.0)[0][0])
        return float(vals[i]), float(errs[i]), n
    c = w / diff
    val = float(np.sum(c * vals) / np.sum(c))
    # Lebesgue constant of Chebyshev nodes is ~ (2/pi) log n + 1
    leb = 2.0 / math.pi * math.log(n) + 1.0
    # truncation check: drop to n-4 nodes on the same interval
    m = n - 4
    km = np.arange(m)
    nodes2 = b + half * np.cos((2 * km + 1) * math.pi / (2 * m))
    vals2 = np.array([_u_connection(a, float(bi), z)[0].real for bi in nodes2])
    w2 = (-1.0) ** km * np.sin((2 * km + 1) * math.pi / (2 * m))
    c2 = w2 / (b - nodes2)
    val2 = float(np.sum(c2 * vals2) / np.sum(c2))
    return val, leb * float(np.max(errs)) + abs(val - val2), n + m


def _u_asymptotic(a: float, b: float, z: float):
    # U ~ z^{-a} sum (a)_k (a-b+1)_k / k! (-1/z)^k
    s, err, n, ok = _asym_sum(a, a - b + 1.0, -1.0 / z)
    return s.real, err, n, ok


def _log_u(a: float, b: float, z: float):
    """Return ``(log|U|, sign, rel_err, terms)``."""
    if a > 0.0:
        if z > 40.0:
            s, err, n, ok = _u_asymptotic(a, b, z)
            if ok and s > 0:
                return -a * math.log(z) + math.log(s), 1.0, err / s + 8.0 * EPS, n
        lv, rel, n = _log_u_integral(a, b, z)
        return lv, 1.0, rel, n
    if _is_nonpos_int(a):
        # a = -m: U = (-1)^m m! L_m^{(b-1)}(z)
        from .laguerre import laguerre

        m = int(-a)
        v = laguerre(m, b - 1.0, z) * math.factorial(m) * (-1.0) ** m
        if v == 0.0:
            return -math.inf, 0.0, 0.0, m + 1
        return math.log(abs(v)), math.copysign(1.0, v), EPS * (4.0 + m), m + 1
    if z >= 2.0 * (1.0 - a):
        v, err, n = _u_loop(a, b, z)
    else:
        v, err, n = _u_connection_real(a, b, z)
    if v == 0.0:
        return -math.inf, 0.0, 0.0, n
    return math.log(abs(v)), math.copysign(1.0, v), err / abs(v), n


def kummer_u(a, b, z) -> FnResult:
    """Tricomi's confluent hypergeometric function ``U(a, b, z)`` for real
    parameters and ``z > 0``."""
    a = as_real(a, "a")
    b = as_real(b, "b")
    z = as_real(z, "z")
    if z <= 0.0:
        raise DomainError("kummer_u requires z > 0")
    lv, sign, rel, n = _log_u(a, b, z)
    if lv > 709.7:
        raise OverflowError("U(a,b,z) overflows")
    if sign == 0.0:
        return FnResult(0.0, EPS, n)
    v = sign * math.exp(lv)
    return FnResult(v, abs(v) * (rel + EPS * (2.0 + abs(lv))), n)


def log_kummer_u(a, b, z) -> tuple[float, float, float]:
    """``(log|U|, sign, rel_err)`` for real parameters, ``z > 0``."""
    a = as_real(a, "a")
    b = as_real(b, "b")
    z = as_real(z, "z")
    if z <= 0.0:
        raise DomainError("kummer_u requires z > 0")
    lv, sign, rel, _ = _log_u(a, b, z)
    return lv, sign, rel
