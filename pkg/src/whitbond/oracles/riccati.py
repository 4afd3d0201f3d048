"""Affine Riccati oracle for the CIR model."""

from __future__ import annotations

import math

from ..errors import ValidationError
from ..models import CIR

RK4_STEPS = 4096


def riccati_cir(model: CIR, tau: float, n_steps: int = RK4_STEPS) -> tuple[float, float]:
    """``(A(tau), B(tau))`` with ``P = exp(A + B r)``.

    Solves ``B' = (beta^2/2) B^2 + alpha B - 1``, ``A' = gamma B`` from
    ``A(0) = B(0) = 0`` with classical RK4 on ``n_steps`` equal steps.
    """
    if not isinstance(model, CIR):
        raise ValidationError("riccati_cir needs a CIR model")
    if not (math.isfinite(tau) and tau >= 0.0):
        raise ValidationError("tau must be finite and >= 0")
    if n_steps < 1:
        raise ValidationError("n_steps must be >= 1")
    a, h2, g = model.alpha, 0.5 * model.beta ** 2, model.gamma

    def rhs(b):
        return h2 * b * b + a * b - 1.0, g * b

    if tau == 0.0:
        return 0.0, 0.0
    h = tau / n_steps
    big_a = big_b = 0.0
    for _ in range(n_steps):
        k1b, k1a = rhs(big_b)
        k2b, k2a = rhs(big_b + 0.5 * h * k1b)
        k3b, k3a = rhs(big_b + 0.5 * h * k2b)
        k4b, k4a = rhs(big_b + h * k3b)
        big_b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        big_a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
    return big_a, big_b
