"""Deterministic quadrature and numerical Laplace inversion."""

from ._types import DecayHint, IntegralEstimate, QuadratureSpec
from .gauss_kronrod import integrate_2d, integrate_interval, integrate_semi_infinite
from .oscillatory import integrate_oscillatory_bessel, mcmahon_zero
from .talbot import laplace_invert

__all__ = [
    "QuadratureSpec",
    "IntegralEstimate",
    "DecayHint",
    "integrate_interval",
    "integrate_semi_infinite",
    "integrate_oscillatory_bessel",
    "integrate_2d",
    "laplace_invert",
    "mcmahon_zero",
]
