"""Generalized Laguerre polynomials."""

from __future__ import annotations

import operator

from ..errors import DomainError
from ._core import as_real


def laguerre(n: int, alpha: float, x: float) -> float:
    """``L_n^{(alpha)}(x)`` by the three-term recurrence.

    ``(k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}``.
    """
    try:
        n = operator.index(n)
    except TypeError as exc:
        raise DomainError(f"degree must be an integer, got {n!r}") from exc
    if n < 0:
        raise DomainError("degree must be nonnegative")
    alpha = as_real(alpha, "alpha")
    x = as_real(x, "x")
    prev, cur = 1.0, 1.0 + alpha - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur


def laguerre_all(n: int, alpha: float, x: float) -> list[float]:
    """``[L_0^{(alpha)}(x), ..., L_n^{(alpha)}(x)]``."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    out = [1.0]
    if n == 0:
        return out
    out.append(1.0 + alpha - x)
    for k in range(1, n):
        out.append(((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1))
    return out
