"""Globally adaptive 7/15-point Gauss-Kronrod quadrature.

Integrands are vectorised: ``f(x)`` receives a 1-D array of nodes and returns
an array of shape ``(n,)`` or ``(n, k)``. Adaptivity is driven by the first
component; the remaining components ride along (used to carry inner error
estimates in iterated integrals).
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from ..errors import ConvergenceError, ValidationError
from ._types import DecayHint, IntegralEstimate, QuadratureSpec

_EPS = np.finfo(float).eps

# Kronrod abscissae (positive half, descending) and weights
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
# 7-point Gauss weights at _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 points, ascending
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[9, 11, 13]] = _WG[2::-1]


def _eval_panels(f, lefts: np.ndarray, rights: np.ndarray):
    """Kronrod value, error estimate and |f| mass for a batch of panels."""
    half = 0.5 * (rights - lefts)
    mid = 0.5 * (rights + lefts)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    y = np.asarray(f(x), dtype=float)
    if y.shape[0] != x.shape[0]:
        raise ValidationError("integrand must return one row per node")
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y.reshape(x.shape[0], -1)).all(axis=1)][:3]
        raise ConvergenceError(f"integrand not finite at x={bad}")
    y = y.reshape(len(lefts), 15, *y.shape[1:])
    wk = _WK.reshape((1, 15) + (1,) * (y.ndim - 2))
    wg = _WG15.reshape(wk.shape)
    hk = half.reshape((-1,) + (1,) * (y.ndim - 2))
    kron = hk * np.sum(wk * y, axis=1)
    gauss = hk * np.sum(wg * y, axis=1)
    y0 = y[:, :, 0] if y.ndim == 3 else y
    k0 = kron[:, 0] if kron.ndim == 2 else kron
    g0 = gauss[:, 0] if gauss.ndim == 2 else gauss
    resabs = half * np.sum(_WK[None, :] * np.abs(y0), axis=1)
    mean = k0 / np.where(half == 0, 1.0, 2.0 * half)
    resasc = half * np.sum(_WK[None, :] * np.abs(y0 - mean[:, None]), axis=1)
    diff = np.abs(k0 - g0)
    # QUADPACK-style scaling of |K - G|, floored by roundoff on the panel
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5), diff)
    err = np.maximum(scaled, 50.0 * _EPS * resabs)
    return kron, err


def integrate_interval(f, a: float, b: float, spec: QuadratureSpec | None = None, *,
                       breakpoints=None, initial_panels: int = 8) -> IntegralEstimate:
    """Adaptive Gauss-Kronrod integral of a vectorised ``f`` over ``[a, b]``.

    Returns an :class:`IntegralEstimate`; for vector-valued integrands
    ``value`` is an array and the error refers to the first component.
    """
    spec = spec or QuadratureSpec()
    if not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise ValidationError("integrate_interval needs finite a <= b")
    if b == a:
        return IntegralEstimate(0.0, 0.0, 1, max(b, 1e-300) if b > 0 else 1.0)
    pts = [a]
    if breakpoints is not None:
        pts += sorted(p for p in breakpoints if a < p < b)
    pts.append(b)
    edges = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        m = max(1, initial_panels // (len(pts) - 1))
        edges += [(lo + (hi - lo) * i / m, lo + (hi - lo) * (i + 1) / m) for i in range(m)]
    lefts = np.array([e[0] for e in edges])
    rights = np.array([e[1] for e in edges])
    vals, errs = _eval_panels(f, lefts, rights)
    # heap of (-err, counter, left, right, value); frozen panels leave the heap
    heap = []
    total = np.sum(vals, axis=0)
    total_err = float(np.sum(errs))
    frozen_err = 0.0
    for i in range(len(lefts)):
        heap.append((-float(errs[i]), i, lefts[i], rights[i], vals[i]))
    heapq.heapify(heap)
    counter = len(heap)
    n_panels = len(heap)
    width_floor = 64.0 * _EPS * max(abs(a), abs(b), b - a)
    while True:
        tot0 = float(np.atleast_1d(total)[0])
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(tot0)):
            break
        if not heap or total_err - frozen_err <= 0.0:
            break
        neg_err, _, lo, hi, v = heapq.heappop(heap)
        if hi - lo <= width_floor:
            frozen_err += -neg_err
            continue
        if n_panels + 1 > spec.max_panels:
            raise ConvergenceError(
                f"max_panels={spec.max_panels} exhausted on [{a}, {b}], "
                f"err {total_err:.3g} above tolerance")
        mid = 0.5 * (lo + hi)
        cv, ce = _eval_panels(f, np.array([lo, mid]), np.array([mid, hi]))
        total = total - v + cv[0] + cv[1]
        total_err += neg_err + float(ce[0] + ce[1])
        heapq.heappush(heap, (-float(ce[0]), counter, lo, mid, cv[0]))
        heapq.heappush(heap, (-float(ce[1]), counter + 1, mid, hi, cv[1]))
        counter += 2
        n_panels += 1
    # re-add in a fixed order so the value does not depend on heap history
    parts = sorted(heap, key=lambda h: h[2])
    value = np.sum([p[4] for p in parts], axis=0) if parts else total
    err = float(sum(-p[0] for p in parts)) + frozen_err
    value = float(value) if np.ndim(value) == 0 else np.asarray(value)
    return IntegralEstimate(value, err, n_panels, b if b > 0 else 1.0)


def integrate_semi_infinite(f, spec: QuadratureSpec | None = None, *, decay: DecayHint,
                            lower: float = 0.0, breakpoints=None,
                            initial_panels: int = 8) -> IntegralEstimate:
    """``int_lower^inf f(x) dx`` for a vectorised ``f`` with a decay hint.

    The range is cut at the first ``T`` where the hinted tail bound drops
    below ``spec.truncation_tail_bound``; the bound is added to the error.

    Raises
    ------
    TailError
        No ``T`` satisfies the tail bound.
    ConvergenceError
        The panel budget is exhausted.
    """
    spec = spec or QuadratureSpec()
    t_star = decay.truncation_point(spec.truncation_tail_bound, lower)
    tail = decay.tail(t_star)
    r = integrate_interval(f, lower, t_star, spec, breakpoints=breakpoints,
                           initial_panels=initial_panels)
    return IntegralEstimate(r.value, r.err_estimate + tail, r.panels_used, t_star)


def integrate_2d(f, spec: QuadratureSpec | None = None, *, decay_x,
                 decay_y: DecayHint, lower_x: float = 0.0, lower_y: float = 0.0,
                 inner_initial_panels: int = 8, outer_initial_panels: int = 8) -> IntegralEstimate:
    """Iterated integral ``int_{lower_y}^inf int_{lower_x}^inf f(x, y) dx dy``.

    ``f(x_array, y)`` is vectorised in ``x`` for a scalar ``y``. The inner
    rule runs at a tenth of the outer tolerances; the reported error is the
    outer estimate plus the integrated inner error estimates. ``decay_x``
    may be a callable ``y -> DecayHint`` when the inner envelope depends on y.
    """
    spec = spec or QuadratureSpec()
    inner_spec = spec.scaled(0.1)

    def outer(ys):
        out = np.empty((len(ys), 2))
        for i, y in enumerate(ys):
            hint = decay_x(float(y)) if callable(decay_x) else decay_x
            r = integrate_semi_infinite(lambda x: f(x, float(y)), inner_spec, decay=hint,
                                        lower=lower_x, initial_panels=inner_initial_panels)
            out[i] = (r.value, r.err_estimate)
        return out

    r = integrate_semi_infinite(outer, spec, decay=decay_y, lower=lower_y,
                                initial_panels=outer_initial_panels)
    value, inner_err = r.value
    return IntegralEstimate(float(value), r.err_estimate + abs(float(inner_err)), r.panels_used,
                            r.truncated_at)
