"""Monte Carlo bond prices from simulated short-rate paths."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..models import GBM, PricingQuery, ShortRateModel, drift_diffusion

SCHEMES = ("full_truncation_euler", "exact_lognormal")
CHUNK_PATHS = 16384


@dataclass(frozen=True)
class McConfig:
    """Simulation settings.

    Attributes
    ----------
    n_paths, n_steps : int
        Paths and equal time steps per path.
    seed : int
        64-bit key of the counter-based Philox generator.
    scheme : str, optional
        ``"full_truncation_euler"`` or ``"exact_lognormal"`` (GBM only);
        ``None`` picks the exact scheme for GBM and Euler otherwise.
    antithetic : bool
        Pair every normal draw with its negative.
    r_cap : float
        Paths whose rate exceeds this are frozen at that value.
    threads : int
        Worker threads; the result does not depend on it.
    """

    n_paths: int = 100_000
    n_steps: int = 200
    seed: int = 20240101
    scheme: str | None = None
    antithetic: bool = False
    r_cap: float = 1e4
    threads: int = 1

    def __post_init__(self):
        for name in ("n_paths", "n_steps", "threads"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ValidationError(f"{name} must be an integer >= 1")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) \
                or not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must be an integer in [0, 2^64)")
        if self.scheme is not None and self.scheme not in SCHEMES:
            raise ValidationError(f"scheme must be one of {SCHEMES}")
        if not (math.isfinite(self.r_cap) and self.r_cap > 0.0):
            raise ValidationError("r_cap must be finite and > 0")
        if self.antithetic and self.n_paths % 2:
            raise ValidationError("antithetic sampling needs an even n_paths")


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of the discount factor, its standard error and the number of capped paths."""

    mean: float
    std_error: float
    paths_capped: int

    def __post_init__(self):
        if not 0.0 <= self.mean <= 1.0:
            raise ValidationError(f"McEstimate.mean must lie in [0, 1], got {self.mean!r}")
        if not self.std_error >= 0.0:
            raise ValidationError(f"McEstimate.std_error must be >= 0, got {self.std_error!r}")


def _chunk(model, q, cfg, scheme, index, m, shift):
    # substream `index` of the keyed Philox family: independent of scheduling
    gen = np.random.Generator(np.random.Philox(key=cfg.seed).jumped(index))
    dt = q.tau / cfg.n_steps
    sdt = math.sqrt(dt)
    n_draw = m // 2 if cfg.antithetic else m
    r = np.full(m, q.r)
    integral = np.zeros(m)
    frozen = np.zeros(m, dtype=bool)
    if scheme == "exact_lognormal":
        mu = (model.alpha - 0.5 * model.beta ** 2) * dt
        vol = model.beta * sdt
    for _ in range(cfg.n_steps):
        z = gen.standard_normal(n_draw)
        if cfg.antithetic:
            z = np.concatenate((z, -z))
        rp = np.maximum(r, 0.0)
        if scheme == "exact_lognormal":
            new = r * np.exp(mu + vol * z)
        else:
            # full truncation: drift and diffusion see max(r, 0)
            a, b = drift_diffusion(model, rp)
            new = r + a * dt + b * sdt * z
        new = np.where(frozen, r, new)
        frozen |= new > cfg.r_cap
        integral += 0.5 * dt * (rp + np.maximum(new, 0.0))
        r = new
    d = np.exp(-integral) - shift
    if cfg.antithetic:
        d = 0.5 * (d[: m // 2] + d[m // 2:])
    return float(np.sum(d)), float(np.sum(d * d)), d.size, int(np.count_nonzero(frozen))


def mc_price(model: ShortRateModel, q: PricingQuery, cfg: McConfig | None = None) -> McEstimate:
    """Estimate ``E exp(-int_0^tau r dt)`` by path simulation.

    The time integral uses the trapezoidal rule on the simulation grid.
    Paths are simulated in fixed chunks, each with its own Philox
    substream, and chunk sums are reduced in chunk order, so identical
    ``(model, q, cfg)`` give bit-identical results for any ``threads``.

    Raises
    ------
    ValidationError
        ``exact_lognormal`` requested for a model other than GBM.
    """
    cfg = cfg or McConfig()
    scheme = cfg.scheme or ("exact_lognormal" if isinstance(model, GBM) else "full_truncation_euler")
    if scheme == "exact_lognormal" and not isinstance(model, GBM):
        raise ValidationError("exact_lognormal stepping is only available for GBM")
    if q.tau == 0.0:
        return McEstimate(1.0, 0.0, 0)
    # centring on the frozen-rate discount keeps the variance sum well conditioned
    shift = math.exp(-q.r * q.tau)
    sizes = [min(CHUNK_PATHS, cfg.n_paths - s) for s in range(0, cfg.n_paths, CHUNK_PATHS)]

    def run(i):
        return _chunk(model, q, cfg, scheme, i, sizes[i], shift)

    if cfg.threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    n = sum(p[2] for p in parts)
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / n
    var = max(s2 - n * mean * mean, 0.0) / (n - 1) if n > 1 else 0.0
    value = min(max(shift + mean, 0.0), 1.0)
    return McEstimate(value, math.sqrt(var / n), sum(p[3] for p in parts))
