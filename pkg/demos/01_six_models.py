"""Price one bond under each of the six short-rate models.

Every closed-form route is printed next to an independent oracle: the
Crank-Nicolson PDE solution and, for the affine CIR model, the Riccati ODE.
"""

from whitbond.models import CI, CIR, CIR_VR, GBM, GCIR, ModifiedCI, PricingQuery
from whitbond.oracles import PdeConfig, pde_estimate, riccati_estimate
from whitbond.pricing import PRICING_METHODS, price

MODELS = [
    CI(0.1, 0.4),
    CIR_VR(0.5),
    GBM(0.2, 0.3),
    GCIR(0.1, 0.4, 0.3),
    CIR(-1.0, 0.5, 0.1),
    ModifiedCI(0.5, 0.4),
]


def main():
    q = PricingQuery(r=0.05, tau=1.0)
    print(f"zero-coupon bond, r = {q.r}, tau = {q.tau}\n")
    print(f"{'model':8} {'route':12} {'price':>20} {'err_estimate':>12}  flags")
    for model in MODELS:
        rows = [price(model, q, m) for m in PRICING_METHODS[model.name]]
        if isinstance(model, CIR):
            rows.append(riccati_estimate(model, q))
        rows.append(pde_estimate(model, q, PdeConfig(400, 400)))
        for est in rows:
            flags = ",".join(sorted(est.flags))
            print(f"{model.name:8} {est.method.value:12} {est.price:20.15f} {est.err_estimate:12.1e}  {flags}")
        print()


if __name__ == "__main__":
    main()
