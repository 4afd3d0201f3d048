"""Crank-Nicolson solution of the bond-price PDE.

Every model's price solves ``P_tau = (1/2) b(r)^2 P_rr + a(r) P_r - r P``
on ``0 < r < r_max`` with ``P(r, 0) = 1`` and the far-field surrogate
``P(r_max, tau) = 0``. At ``r = 0`` the row is Dirichlet ``P = 1`` except
for CIR with ``gamma > 0``: there the drift pushes the rate off zero, the
price at ``r = 0`` is ``e^{A(tau)} < 1`` and the PDE itself, reduced to
``P_tau = gamma P_r``, is used as the boundary row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_banded

from ..errors import StabilityError, ValidationError
from ..models import CIR, PricingQuery, ShortRateModel, drift_diffusion

GRIDS = ("uniform_r", "sqrt_r", "log_r")
# e^{-r_max tau} = 1e-12 when r_max is left to the default
_FAR_FIELD = 12.0 * math.log(10.0)
_LOG_STRETCH = 6.0
_RANNACHER_STEPS = 2
_OSC_TOL = 1e-6


@dataclass(frozen=True)
class PdeConfig:
    """Grid settings.

    Attributes
    ----------
    n_space, n_time : int
        Number of space intervals and time steps.
    r_max : float, optional
        Far boundary; ``None`` gives ``max(27.6/tau, 4 r)`` so that
        ``e^{-r_max tau} < 1e-12``.
    grid : str
        ``"uniform_r"``, ``"sqrt_r"`` (``r = r_max u^2``) or ``"log_r"``
        (``r = r_max expm1(6u)/expm1(6)``) with ``u`` uniform on [0, 1].
    """

    n_space: int = 400
    n_time: int = 400
    r_max: float | None = None
    grid: str = "sqrt_r"

    def __post_init__(self):
        for name in ("n_space", "n_time"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 2:
                raise ValidationError(f"{name} must be an integer >= 2")
        if self.r_max is not None and not (math.isfinite(self.r_max) and self.r_max > 0.0):
            raise ValidationError("r_max must be finite and > 0")
        if self.grid not in GRIDS:
            raise ValidationError(f"grid must be one of {GRIDS}")


def _nodes(cfg: PdeConfig, r_max: float) -> np.ndarray:
    u = np.linspace(0.0, 1.0, cfg.n_space + 1)
    if cfg.grid == "uniform_r":
        r = r_max * u
    elif cfg.grid == "sqrt_r":
        r = r_max * u * u
    else:
        r = r_max * np.expm1(_LOG_STRETCH * u) / math.expm1(_LOG_STRETCH)
    r[-1] = r_max
    return r


def _operator(model, r):
    """Tridiagonal ``L`` as (lower, diag, upper) for the interior rows."""
    a, b = drift_diffusion(model, r)
    a = np.broadcast_to(np.asarray(a, dtype=float), r.shape)
    half_b2 = 0.5 * np.asarray(b, dtype=float) ** 2
    half_b2 = np.broadcast_to(half_b2, r.shape)
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    ai, di = a[1:-1], half_b2[1:-1]
    # three-point first and second derivatives on a non-uniform grid
    lo = di * 2.0 / (hm * (hm + hp)) - ai * hp / (hm * (hm + hp))
    mid = -di * 2.0 / (hm * hp) + ai * (hp - hm) / (hm * hp) - r[1:-1]
    up = di * 2.0 / (hp * (hm + hp)) + ai * hm / (hp * (hm + hp))
    return lo, mid, up


def _left_row(model, r):
    """Coefficients of ``P_tau`` at ``r = 0`` on nodes 0, 1, 2, or ``None`` for Dirichlet."""
    if isinstance(model, CIR) and model.gamma > 0.0:
        h1, h2 = r[1] - r[0], r[2] - r[1]
        w = np.array([-(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                      (h1 + h2) / (h1 * h2),
                      -h1 / (h2 * (h1 + h2))])
        return model.gamma * w
    return None


def _solve(model, q, cfg, r_max):
    r = _nodes(cfg, r_max)
    n = r.size
    lo, mid, up = _operator(model, r)
    left = _left_row(model, r)
    p = np.ones(n)
    p[-1] = 0.0
    if left is None:
        p_left = 1.0

    def matvec(v, c):
        # v + c L v on the interior and the r = 0 row; Dirichlet rows untouched
        out = v.copy()
        out[1:-1] += c * (lo * v[:-2] + mid * v[1:-1] + up * v[2:])
        if left is not None:
            out[0] += c * (left @ v[:3])
        return out

    def banded(c):
        # I - c L in solve_banded's (1, 1) layout; node 0 row folds its third
        # coefficient into a pre-elimination step below
        ab = np.zeros((3, n))
        ab[1] = 1.0
        ab[0, 2:] = -c * up
        ab[1, 1:-1] -= c * mid
        ab[2, :-2] = -c * lo
        return ab

    def implicit(rhs, c):
        ab = banded(c)
        if left is None:
            rhs[0] = p_left
        else:
            # row 0: (1 - c w0) P0 - c w1 P1 - c w2 P2; eliminate P2 with row 1
            w0, w1, w2 = -c * left
            l1, d1, u1 = ab[2, 0], ab[1, 1], ab[0, 2]
            f = w2 / u1
            ab[1, 0] = 1.0 + w0 - f * l1
            ab[0, 1] = w1 - f * d1
            rhs[0] -= f * rhs[1]
        rhs[-1] = 0.0
        return solve_banded((1, 1), ab, rhs)

    dt = q.tau / cfg.n_time
    n_start = min(_RANNACHER_STEPS, cfg.n_time)
    # Rannacher start: the first steps as pairs of implicit half-steps
    for _ in range(2 * n_start):
        p = implicit(p.copy(), 0.5 * dt)
    for _ in range(cfg.n_time - n_start):
        p = implicit(matvec(p, 0.5 * dt), 0.5 * dt)
    return r, p


def _check(r, p):
    bad = np.max(p) > 1.0 + _OSC_TOL or np.min(p) < -_OSC_TOL
    d = np.diff(p)
    if bad or np.any(d > _OSC_TOL):
        raise StabilityError("finite-difference price is not monotone in r; refine the grid")


def _interp(r, p, x):
    # cubic Lagrange on the four nearest nodes
    i = int(np.clip(np.searchsorted(r, x) - 2, 0, r.size - 4))
    xs, ys = r[i:i + 4], p[i:i + 4]
    out = 0.0
    for j in range(4):
        w = 1.0
        for k in range(4):
            if k != j:
                w *= (x - xs[k]) / (xs[j] - xs[k])
        out += w * ys[j]
    return out


def pde_price(model: ShortRateModel, q: PricingQuery, cfg: PdeConfig | None = None) -> float:
    """Crank-Nicolson price at ``q.r``.

    Central differences on the chosen grid, Rannacher start-up (four
    implicit half-steps) against the corner discontinuity at ``r_max``,
    cubic interpolation to ``q.r``.

    Raises
    ------
    ValidationError
        ``q.r`` outside ``[0, r_max)``.
    StabilityError
        The solution leaves [0, 1] or increases with ``r`` by more than 1e-6.
    """
    cfg = cfg or PdeConfig()
    if q.tau == 0.0:
        return 1.0
    r_max = cfg.r_max if cfg.r_max is not None else max(_FAR_FIELD / q.tau, 4.0 * q.r)
    if not q.r < r_max:
        raise ValidationError(f"r={q.r:g} is not inside the grid [0, {r_max:g})")
    r, p = _solve(model, q, cfg, r_max)
    _check(r, p)
    return float(_interp(r, p, q.r))


def pde_richardson(model: ShortRateModel, q: PricingQuery,
                   cfg: PdeConfig | None = None) -> tuple[float, float]:
    """Richardson-extrapolated price from ``cfg`` and the doubled grid.

    Returns ``(value, err)`` with ``value = (4 P_fine - P_coarse)/3`` and
    ``err = |P_fine - P_coarse|/3``, the estimated error of ``P_fine``.
    """
    cfg = cfg or PdeConfig()
    coarse = pde_price(model, q, cfg)
    fine = pde_price(model, q, replace(cfg, n_space=2 * cfg.n_space, n_time=2 * cfg.n_time))
    return (4.0 * fine - coarse) / 3.0, abs(fine - coarse) / 3.0
