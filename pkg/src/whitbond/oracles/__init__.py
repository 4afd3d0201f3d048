"""Independent verification oracles: Monte Carlo, finite differences and Riccati ODE."""

from .estimates import PATHS_CAPPED, mc_estimate, pde_estimate, riccati_estimate
from .mc import SCHEMES, McConfig, McEstimate, mc_price
from .pde import GRIDS, PdeConfig, pde_price, pde_richardson
from .riccati import RK4_STEPS, riccati_cir

__all__ = [
    "McConfig",
    "McEstimate",
    "mc_price",
    "SCHEMES",
    "PdeConfig",
    "pde_price",
    "pde_richardson",
    "GRIDS",
    "riccati_cir",
    "RK4_STEPS",
    "mc_estimate",
    "pde_estimate",
    "riccati_estimate",
    "PATHS_CAPPED",
]
