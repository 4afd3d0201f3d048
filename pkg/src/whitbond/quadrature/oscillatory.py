"""Integrals ``int_0^inf g(x) J_nu(x) dx`` with slowly varying ``g``."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceError
from ..specialfn import bessel_j_array
from ._types import DecayHint, IntegralEstimate, QuadratureSpec
from .gauss_kronrod import integrate_interval

_EULER_LEVELS = 14
_MIN_TERMS = 6


def mcmahon_zero(nu: float, k: int) -> float:
    """First-order McMahon approximation to the k-th positive zero of J_nu."""
    b = (k + 0.5 * nu - 0.25) * math.pi
    return b - (4.0 * nu * nu - 1.0) / (8.0 * b)


def _first_index(nu: float) -> int:
    # McMahon is monotone and close to the true zeros once b >= max(2 nu, 3)
    k = 1
    while (k + 0.5 * nu - 0.25) * math.pi < max(2.0 * abs(nu), 3.0):
        k += 1
    return k


def _euler(partial: list[float], levels: int) -> float:
    # repeated averaging of consecutive partial sums of an alternating series
    s = np.asarray(partial[-(levels + 1):], dtype=float)
    while s.size > 1:
        s = 0.5 * (s[1:] + s[:-1])
    return float(s[0])


def integrate_oscillatory_bessel(g, nu: float, spec: QuadratureSpec | None = None, *,
                                 decay: DecayHint | None = None) -> IntegralEstimate:
    """``int_0^inf g(x) J_nu(x) dx`` split at the zeros of ``J_nu``.

    Parameters
    ----------
    g : callable
        Vectorised envelope factor.
    nu : float
        Real order of the Bessel function.
    decay : DecayHint, optional
        Envelope of the full integrand ``g J_nu``. When given, half-period
        pieces are summed until the hinted tail falls below
        ``spec.truncation_tail_bound``; otherwise the alternating piece sums
        are accelerated by the Euler transform.
    """
    spec = spec or QuadratureSpec()
    seg_spec = spec.scaled(0.1)

    def f(x):
        return g(x) * bessel_j_array(nu, x)

    k0 = _first_index(nu)
    head = integrate_interval(f, 0.0, mcmahon_zero(nu, k0), seg_spec)
    total = head.value
    err = head.err_estimate
    panels = head.panels_used
    partial = [total]
    estimates: list[float] = []
    k = k0
    left = mcmahon_zero(nu, k)
    while True:
        right = mcmahon_zero(nu, k + 1)
        piece = integrate_interval(f, left, right, seg_spec, initial_panels=1)
        total += piece.value
        err += piece.err_estimate
        panels += piece.panels_used
        partial.append(total)
        k += 1
        left = right
        if panels > spec.max_panels:
            raise ConvergenceError(f"oscillatory integral: max_panels={spec.max_panels} exhausted")
        if decay is not None:
            tail = decay.tail(right)
            if tail <= spec.truncation_tail_bound:
                return IntegralEstimate(total, err + tail, panels, right)
            continue
        n_terms = len(partial) - 1
        if n_terms < _MIN_TERMS:
            continue
        estimates.append(_euler(partial, min(_EULER_LEVELS, n_terms - 1)))
        if len(estimates) >= 3:
            d1 = abs(estimates[-1] - estimates[-2])
            d2 = abs(estimates[-2] - estimates[-3])
            tol = max(spec.abs_tol, spec.rel_tol * abs(estimates[-1]))
            if max(d1, d2) <= tol and n_terms > _EULER_LEVELS:
                return IntegralEstimate(estimates[-1], err + 2.0 * max(d1, d2), panels, right)
