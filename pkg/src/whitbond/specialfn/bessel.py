"""Bessel functions J, I, K of real order, J of complex order, K of
imaginary order.

Method map
----------
J_nu(x)
    Power series while the terms do not cancel badly, otherwise Miller's
    backward recurrence normalised with the Neumann sum
    ``sum_m (nu0+2m) Gamma(nu0+m)/m! J_{nu0+2m}(x) = (x/2)^nu0``.
    The same recurrence serves complex order.
I_nu(x)
    Power series (positive terms) with a log-scaled prefactor; Hankel
    asymptotic expansion for very large x.
K_nu(x)
    ``pi/(2 sin nu pi) (I_{-nu} - I_nu)`` where that difference is well
    conditioned (small x, order away from integers); elsewhere the integral
    ``int_0^inf exp(-x cosh t) cosh(nu t) dt`` by a log-scaled trapezoid rule.
K_{i theta}(x)
    ``-pi Im I_{i theta}(x) / sinh(pi theta)`` from the series when x < 0.7 theta,
    otherwise the integral along the shifted contour
    ``t + i phi`` with ``x sin phi = theta`` (steepest-descent direction).
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import ConvergenceError, DomainError, SeriesRadiusExceeded
from ._core import (
    EPS,
    SERIES_RADIUS,
    FnResult,
    as_complex,
    as_real,
    sum_series,
)
from .gamma import loggamma_c

_LOG_2PI = math.log(2.0 * math.pi)


def _is_int(v: float) -> bool:
    return v == math.floor(v)


# ---------------------------------------------------------------- J


def _j_series(nu: complex, x: float) -> tuple[complex, float, int]:
    # (x/2)^nu / Gamma(nu+1) * sum (-x^2/4)^k / (k! (nu+1)_k), x > 0
    q = -0.25 * x * x

    def ratio(k):
        return q / ((k + 1) * (nu + k + 1))

    s, sabs, n = sum_series(1.0 + 0.0j, ratio)
    logpre = nu * math.log(0.5 * x) - loggamma_c(nu + 1.0)
    pre = cmath.exp(logpre)
    val = pre * s
    err = abs(pre) * sabs * EPS * (4.0 + 0.5 * n)
    return val, err, n


def _miller_start(nu_abs: float, x: float) -> int:
    # start well beyond the turning point so J_N(x) is negligible
    return int(max(x, nu_abs) + 50.0 + 18.0 * max(x, 1.0) ** (1.0 / 3.0))


def _j_miller(nu: complex, x: float) -> tuple[complex, complex, float, int]:
    """Backward recurrence for ``J_nu(x)`` and ``J_{nu+1}(x)``, ``Re nu >= 0``."""
    n = math.floor(nu.real)
    nu0 = nu - n
    nu0_zero = nu0 == 0
    big_n = _miller_start(abs(nu), x) + n
    big_n += big_n % 2
    two_over_x = 2.0 / x

    def coef(m):
        # (nu0+2m) Gamma(nu0+m) / m!
        if nu0_zero:
            return 1.0 if m == 0 else 2.0
        return (nu0 + 2 * m) * cmath.exp(loggamma_c(nu0 + m) - math.lgamma(m + 1.0))

    j_next = 0.0 + 0.0j
    j_cur = 1e-300 + 0.0j
    target = target1 = 0.0j
    norm = 0.0 + 0.0j
    for k in range(big_n, 0, -1):
        j_prev = two_over_x * (nu0 + k) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        order = k - 1
        if order == n:
            target, target1 = j_cur, j_next
        if order % 2 == 0:
            norm += coef(order // 2) * j_cur
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            target *= 1e-250
            target1 *= 1e-250
    rhs = 1.0 if nu0_zero else cmath.exp(nu0 * math.log(0.5 * x))
    scale = rhs / norm
    val = target * scale
    err = (abs(val) + abs(scale) * 1e-300) * EPS * (10.0 + math.sqrt(big_n))
    return val, target1 * scale, err, big_n


def _j_series_ok(nu: complex, x: float) -> bool:
    if x <= 8.0:
        return True
    # accept when the order dominates the argument (little cancellation)
    return 0.25 * x * x <= 0.5 * (abs(nu) + 1.0)


def _j_recurrence(nu: complex, x: float) -> tuple[complex, float, int]:
    if nu.real >= 0.0:
        v, _, err, n = _j_miller(nu, x)
        return v, err, n
    # shift up to Re >= 0 then recur downward (the stable direction)
    m = math.ceil(-nu.real)
    hi, hi1, err, n = _j_miller(nu + m, x)
    cur, nxt = hi, hi1
    for k in range(m, 0, -1):
        order = nu + k  # J_{order-1} = 2 order/x J_order - J_{order+1}
        cur, nxt = 2.0 * order / x * cur - nxt, cur
    growth = max(1.0, abs(cur) / max(abs(hi), 1e-300))
    return cur, err * growth + EPS * abs(cur) * m, n + m


def bessel_j(nu, x, *, series_radius: float = SERIES_RADIUS) -> FnResult:
    """Bessel function of the first kind ``J_nu(x)`` for ``x >= 0``.

    Parameters
    ----------
    nu : complex or float
        Order. Complex orders are accepted for ``x <= series_radius``.
    x : float
        Nonnegative real argument.
    """
    nuc = as_complex(nu, "nu")
    x = as_real(x, "x")
    if x < 0.0:
        raise DomainError("bessel_j requires x >= 0")
    real_order = nuc.imag == 0.0
    if not real_order and x > series_radius:
        raise SeriesRadiusExceeded(
            f"complex-order J requested at x={x} > series_radius={series_radius}"
        )
    if real_order and nuc.real < 0.0 and _is_int(nuc.real):
        m = int(-nuc.real)
        r = bessel_j(float(m), x)
        sign = -1.0 if m % 2 else 1.0
        return FnResult(sign * r.value, r.abs_err, r.terms_used)
    if x == 0.0:
        if nuc == 0:
            return FnResult(1.0 if real_order else 1.0 + 0.0j, 0.0, 1)
        if nuc.real > 0.0:
            return FnResult(0.0 if real_order else 0j, 0.0, 1)
        raise DomainError("J_nu(0) is singular for Re nu < 0")
    if _j_series_ok(nuc, x):
        val, err, n = _j_series(nuc, x)
    else:
        val, err, n = _j_recurrence(nuc, x)
    if real_order:
        return FnResult(val.real, err, n)
    return FnResult(complex(val), err, n)


def _j_hankel_ok(nu: float, x):
    return x >= 25.0 + 0.25 * nu * nu


def _j_hankel(nu: float, x: np.ndarray) -> np.ndarray:
    # J ~ sqrt(2/(pi x)) (P cos w - Q sin w), w = x - nu pi/2 - pi/4
    m4 = 4.0 * nu * nu
    inv8x = 1.0 / (8.0 * x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for k in range(1, 80):
        term = term * (m4 - (2 * k - 1) ** 2) * inv8x / k
        if k % 2:
            q += term if k % 4 == 1 else -term
        else:
            p += -term if k % 4 == 2 else term
        if np.all(np.abs(term) <= 1e-17 * np.abs(p)):
            break
    w = x - (0.5 * nu + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(w) - q * np.sin(w))


def bessel_j_array(nu: float, x) -> np.ndarray:
    """``J_nu(x)`` of one real order at many nonnegative arguments.

    Large arguments go through the Hankel expansion in one vectorised
    pass; the rest call :func:`bessel_j` point by point.
    """
    nu = as_real(nu, "nu")
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 0.0) or not np.all(np.isfinite(xx)):
        raise DomainError("bessel_j_array requires finite x >= 0")
    out = np.empty(xx.shape)
    big = _j_hankel_ok(nu, xx)
    if np.any(big):
        out[big] = _j_hankel(nu, xx[big])
    for idx in zip(*np.nonzero(~big)):
        out[idx] = bessel_j(nu, float(xx[idx])).value
    return out


# ---------------------------------------------------------------- I


def _log_i_series(nu: float, x: float) -> tuple[float, float, float, int]:
    """log I_nu(x) via the positive-term series; returns (log|I|, sign, rel_err, n)."""
    q = 0.25 * x * x
    acc = 1.0
    term = 1.0
    sabs = 1.0
    log_scale = 0.0
    k = 0
    run = 0
    while True:
        term *= q / ((k + 1) * (nu + k + 1))
        acc += term
        sabs += abs(term)
        k += 1
        if abs(term) <= 1e-17 * abs(acc):
            run += 1
            if run >= 5:
                break
        else:
            run = 0
        if acc > 1e280:
            acc *= 1e-280
            term *= 1e-280
            sabs *= 1e-280
            log_scale += 280.0 * math.log(10.0)
        if k > 100000:
            raise ConvergenceError("I series did not converge")
    g_arg = nu + 1.0
    if g_arg <= 0.0 and _is_int(g_arg):
        # 1/Gamma vanishes; the series starts at k = -nu: use I_{-n} = I_n
        raise DomainError("integer negative order handled by caller")
    lg = math.lgamma(g_arg)
    # sign of Gamma(g) for negative non-integer g is (-1)^ceil(-g)
    gsign = 1.0 if g_arg > 0 else (-1.0 if math.ceil(-g_arg) % 2 else 1.0)
    ssign = 1.0 if acc > 0 else -1.0
    logv = nu * math.log(0.5 * x) - lg + math.log(abs(acc)) + log_scale
    rel = EPS * (4.0 + 0.5 * k) * (sabs / abs(acc))
    return logv, gsign * ssign, rel, k + 1


def _log_i_asymptotic(nu: float, x: float) -> tuple[float, float, int]:
    # I_nu(x) ~ e^x / sqrt(2 pi x) sum_k (-1)^k a_k(nu) / x^k
    mu4 = 4.0 * nu * nu
    term = 1.0
    s = 1.0
    best = abs(term)
    k = 0
    while True:
        k += 1
        term *= -(mu4 - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(term) > best and k > 2:
            break
        s += term
        best = abs(term)
        if abs(term) < 1e-17 * abs(s):
            break
        if k > 200:
            break
    logv = x - 0.5 * (_LOG_2PI + math.log(x)) + math.log(s)
    return logv, max(best, EPS * k), k


def _use_i_asymptotic(nu: float, x: float) -> bool:
    return x > 700.0 or (x > 60.0 and x > 1.5 * nu * nu)


def log_bessel_i(nu, x) -> FnResult:
    """``log I_nu(x)`` for real order and ``x > 0``.

    Only defined where ``I_nu(x) > 0`` (always true for ``nu >= 0`` or
    ``nu`` a negative integer); otherwise raises :class:`DomainError`.
    """
    nu = as_real(nu, "nu")
    x = as_real(x, "x")
    if x <= 0.0:
        raise DomainError("log_bessel_i requires x > 0")
    if nu < 0.0 and _is_int(nu):
        nu = -nu
    if _use_i_asymptotic(abs(nu), x) and nu >= 0.0:
        lv, rel, n = _log_i_asymptotic(nu, x)
        return FnResult(lv, rel, n)
    lv, sign, rel, n = _log_i_series(nu, x)
    if sign < 0:
        raise DomainError("I_nu(x) is negative here; use bessel_i")
    return FnResult(lv, rel, n)


def bessel_i(nu, x) -> FnResult:
    """Modified Bessel function of the first kind ``I_nu(x)``, ``x >= 0``.

    Raises ``OverflowError`` when the value exceeds the double range; use
    :func:`log_bessel_i` there.
    """
    nu = as_real(nu, "nu")
    x = as_real(x, "x")
    if x < 0.0:
        raise DomainError("bessel_i requires x >= 0")
    if nu < 0.0 and _is_int(nu):
        nu = -nu
    if x == 0.0:
        if nu == 0.0:
            return FnResult(1.0, 0.0, 1)
        if nu > 0.0:
            return FnResult(0.0, 0.0, 1)
        raise OverflowError("I_nu(0) is infinite for negative non-integer order")
    if _use_i_asymptotic(abs(nu), x) and nu >= 0.0:
        lv, rel, n = _log_i_asymptotic(nu, x)
        sign = 1.0
    else:
        lv, sign, rel, n = _log_i_series(nu, x)
    if lv > 709.7:
        raise OverflowError("I_nu(x) overflows; use log_bessel_i")
    v = sign * math.exp(lv)
    return FnResult(v, abs(v) * (rel + EPS * (2.0 + abs(lv))), n)


# ---------------------------------------------------------------- K


_K_H = 0.05


def _log_k_integral(nu: float, x: float) -> tuple[float, float, int]:
    """log K_nu(x) from the trapezoid rule on int_0^inf e^{-x cosh t} cosh(nu t)."""
    nu = abs(nu)
    # integrand exponent f(t) = -x (cosh t - 1) + log cosh(nu t); peak where
    # x sinh t = nu tanh(nu t) ~ nu
    t_peak = math.asinh(nu / x) if nu > 0 else 0.0

    def f(t):
        return -x * (math.cosh(t) - 1.0) + _log_cosh(nu * t)

    fmax = f(t_peak)
    # find truncation: f(T) < fmax - 45
    t_hi = max(t_peak, 1.0)
    while f(t_hi) > fmax - 45.0:
        t_hi = t_hi * 1.5 + 1.0
    # step adapted to the width of the peak
    width = 1.0 / math.sqrt(x * math.cosh(t_peak) + 1e-300)
    h = min(_K_H, width / 8.0)
    n = int(math.ceil(t_hi / h))
    t = np.arange(n + 1) * h
    ft = -x * (np.cosh(t) - 1.0) + _log_cosh_np(nu * t)
    w = np.exp(ft - fmax)
    w[0] *= 0.5
    s = float(np.sum(w)) * h
    logv = -x + fmax + math.log(s)
    return logv, EPS * (8.0 + math.sqrt(n)), n + 1


def _log_cosh(y: float) -> float:
    y = abs(y)
    return y + math.log1p(math.exp(-2.0 * y)) - math.log(2.0)


def _log_cosh_np(y):
    y = np.abs(y)
    return y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)


def _k_from_i(nu: float, x: float) -> tuple[float, float, int]:
    ip = bessel_i(nu, x)
    im = bessel_i(-nu, x)
    s = math.sin(nu * math.pi)
    v = math.pi / (2.0 * s) * (im.value - ip.value)
    err = math.pi / (2.0 * abs(s)) * (im.abs_err + ip.abs_err) + EPS * abs(v)
    return v, err, ip.terms_used + im.terms_used


def _k_use_difference(nu: float, x: float) -> bool:
    d = abs(nu - round(nu))
    return x <= 2.0 and d >= 0.05 and abs(nu) <= 30.0


def log_bessel_k(nu, x) -> FnResult:
    """``log K_nu(x)`` for real order and ``x > 0``."""
    nu = as_real(nu, "nu")
    x = as_real(x, "x")
    if x <= 0.0:
        raise DomainError("bessel_k requires x > 0")
    lv, rel, n = _log_k_integral(nu, x)
    return FnResult(lv, rel, n)


def bessel_k(nu, x) -> FnResult:
    """Modified Bessel function of the second kind ``K_nu(x)``, ``x > 0``."""
    nu = as_real(nu, "nu")
    x = as_real(x, "x")
    if x <= 0.0:
        raise DomainError("bessel_k requires x > 0")
    nu = abs(nu)
    if _k_use_difference(nu, x):
        v, err, n = _k_from_i(nu, x)
        return FnResult(v, err, n)
    lv, rel, n = _log_k_integral(nu, x)
    if lv > 709.7:
        raise OverflowError("K_nu(x) overflows; use log_bessel_k")
    v = math.exp(lv)
    return FnResult(v, v * (rel + EPS * (2.0 + abs(lv))), n)


# ---------------------------------------------------------------- K_{i theta}


def _k_imag_series(theta: float, x: float) -> tuple[float, float, int]:
    # I_{i th}(x) = (x/2)^{i th} / Gamma(1+i th) * sum (x^2/4)^k/(k! (1+i th)_k)
    nu = complex(0.0, theta)
    q = 0.25 * x * x
    term = 1.0 + 0.0j
    s = 1.0 + 0.0j
    sabs = 1.0
    k = 0
    run = 0
    while True:
        term *= q / ((k + 1) * (nu + k + 1))
        s += term
        sabs += abs(term)
        k += 1
        if abs(term) <= 1e-17 * abs(s):
            run += 1
            if run >= 5:
                break
        else:
            run = 0
        if k > 20000:
            raise ConvergenceError("K_{i theta} series did not converge")
    # -pi Im(I) / sinh(pi th), with |1/Gamma(1+i th)| ~ e^{pi th/2} folded
    # into the log to avoid overflow
    lg = loggamma_c(1.0 + nu)
    phase = theta * math.log(0.5 * x) - lg.imag
    # log|pre| = -Re lg - log sinh(pi th) + log pi
    log_mag = -lg.real + math.log(math.pi) - _log_sinh(math.pi * theta)
    im_part = (cmath.exp(1j * phase) * s).imag
    v = -math.exp(log_mag) * im_part
    env = math.exp(log_mag) * abs(s)
    err = math.exp(log_mag) * sabs * EPS * (4.0 + 0.5 * k + abs(phase))
    return v, err + EPS * 0.0 * env, k + 1


def _log_sinh(y: float) -> float:
    if y > 20.0:
        return y - math.log(2.0) + math.log1p(-math.exp(-2.0 * y))
    return math.log(math.sinh(y))


def _k_imag_contour(theta: float, x: float, h: float = 0.05) -> tuple[float, float, int]:
    # t = u + i phi with x sin phi = theta (capped) ; integrand
    # Re[e^{-x cosh(u + i phi)} e^{i theta (u + i phi)}], u over R, /2
    sphi = min(theta / x, 0.95)
    phi = math.asin(sphi)
    c, s_ = math.cos(phi), math.sin(phi)
    # decay exponent -x c (cosh u - 1); truncate at 40 e-folds below peak
    u_max = math.acosh(1.0 + 42.0 / (x * c)) if x * c > 0 else 50.0
    width = 1.0 / math.sqrt(x * c)
    step = min(h, width / 6.0, 0.5 / max(theta, 1.0) * 2.0)
    n = int(math.ceil(u_max / step))
    u = np.arange(-n, n + 1) * step
    expo = -x * c * (np.cosh(u) - 1.0)
    phase = -x * s_ * np.sinh(u) + theta * u
    w = np.exp(expo) * np.cos(phase)
    total = float(np.sum(w)) * step * 0.5
    # common factor e^{-x c} e^{-theta phi}
    log_f = -x * c - theta * phi
    v = math.exp(log_f) * total
    env = math.exp(log_f) * float(np.sum(np.exp(expo))) * step * 0.5
    return v, env * EPS * (8.0 + math.sqrt(2 * n)), 2 * n + 1


def _k_imag_prefers_series(theta: float, x: float) -> bool:
    return x <= 2.0 or x < 0.7 * theta


def bessel_k_imag(theta, x) -> FnResult:
    """``K_{i theta}(x)`` for real ``theta >= 0`` and ``x > 0``.

    The value is real; ``abs_err`` is measured against the local envelope of
    the oscillation, so relative error is meaningful away from the zeros.
    """
    theta = as_real(theta, "theta")
    x = as_real(x, "x")
    if x <= 0.0:
        raise DomainError("bessel_k_imag requires x > 0")
    theta = abs(theta)
    if theta == 0.0:
        r = bessel_k(0.0, x)
        return FnResult(float(r.value), r.abs_err, r.terms_used)
    if _k_imag_prefers_series(theta, x):
        v, err, n = _k_imag_series(theta, x)
    else:
        v, err, n = _k_imag_contour(theta, x)
    return FnResult(float(v), float(err), n)


def bessel_k_imag_array(theta, x):
    """Vectorised convenience wrapper returning a float ndarray."""
    th = np.asarray(theta, dtype=float)
    xx = np.asarray(x, dtype=float)
    th, xx = np.broadcast_arrays(th, xx)
    out = np.empty(th.shape)
    for idx in np.ndindex(th.shape):
        out[idx] = bessel_k_imag(float(th[idx]), float(xx[idx])).value
    return out
