"""Special functions needed by the bond-pricing formulas.

All functions take plain Python numbers and return :class:`FnResult`
(value, abs_err, terms_used) unless noted otherwise.
"""

from ._core import MU_INTEGER_GUARD, POLE_GUARD, SERIES_RADIUS, FnResult
from .bessel import (
    bessel_i,
    bessel_j,
    bessel_j_array,
    bessel_k,
    bessel_k_imag,
    log_bessel_i,
    log_bessel_k,
)
from .errfn import erf, erfc
from .gamma import gamma, loggamma, rgamma
from .kummer import kummer_m, kummer_u, log_kummer_m, log_kummer_u
from .laguerre import laguerre, laguerre_all
from .whittaker import (
    WhittakerIndex,
    log_whittaker_m,
    log_whittaker_w,
    whittaker_m,
    whittaker_w,
)

__all__ = [
    "FnResult",
    "WhittakerIndex",
    "POLE_GUARD",
    "MU_INTEGER_GUARD",
    "SERIES_RADIUS",
    "gamma",
    "loggamma",
    "rgamma",
    "bessel_j",
    "bessel_j_array",
    "bessel_i",
    "bessel_k",
    "bessel_k_imag",
    "log_bessel_i",
    "log_bessel_k",
    "kummer_m",
    "kummer_u",
    "log_kummer_m",
    "log_kummer_u",
    "whittaker_m",
    "whittaker_w",
    "log_whittaker_m",
    "log_whittaker_w",
    "laguerre",
    "laguerre_all",
    "erf",
    "erfc",
]
