"""Continuously compounded yield curves y(tau) = -ln P / tau.

Mean-reverting CIR flattens towards its long-run level. The
Constantinides-Ingersoll curve depends on r and tau only through r tau, so
doubling r and halving tau reproduces the same prices.
"""

import math

from whitbond.models import CI, CIR, GCIR, PricingQuery
from whitbond.pricing import price

TAUS = (0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0)


def curve(model, r, taus=TAUS):
    return [(t, price(model, PricingQuery(r, t)).price) for t in taus]


def main():
    print(f"{'tau':>6} " + " ".join(f"{name:>10}" for name in ("CIR", "CI", "GCIR")))
    curves = [curve(CIR(-1.0, 0.5, 0.1), 0.05), curve(CI(0.1, 0.4), 0.05), curve(GCIR(0.1, 0.4, 0.3), 0.05)]
    for i, t in enumerate(TAUS):
        ys = [-math.log(c[i][1]) / t for c in curves]
        print(f"{t:6.2f} " + " ".join(f"{y:10.6f}" for y in ys))

    print("\nCI depends only on r tau:")
    m = CI(0.1, 0.4)
    for t in (1.0, 4.0):
        a = price(m, PricingQuery(0.05, t)).price
        b = price(m, PricingQuery(0.10, t / 2)).price
        print(f"  P(0.05, {t}) = {a:.15f}   P(0.10, {t / 2}) = {b:.15f}")


if __name__ == "__main__":
    main()
