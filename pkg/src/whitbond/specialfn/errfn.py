"""Error functions (thin wrappers over the C library)."""

from __future__ import annotations

import math

from ._core import as_real


def erf(x: float) -> float:
    return math.erf(as_real(x, "x"))


def erfc(x: float) -> float:
    return math.erfc(as_real(x, "x"))
