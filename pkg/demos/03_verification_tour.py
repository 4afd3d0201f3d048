"""How far each representation can be trusted.

1. CIR: the Crank-Nicolson error falls fourfold per grid doubling.
2. GBM: the numerically inverted Laplace image against the closed form and
   against exact lognormal Monte Carlo.
3. Modified CI: the correction integral loses digits as tau shrinks, and the
   reported error grows accordingly until the route refuses to answer.
"""

import math

from whitbond.errors import ConvergenceError
from whitbond.models import CIR, GBM, ModifiedCI, PricingQuery
from whitbond.oracles import McConfig, PdeConfig, mc_price, pde_price
from whitbond.pricing import price


def pde_convergence():
    model, q = CIR(-1.0, 0.5, 0.1), PricingQuery(0.05, 1.0)
    exact = price(model, q).price
    print("CIR Crank-Nicolson convergence (sqrt_r grid, r_max = 2)")
    prev = None
    for n in (100, 200, 400, 800):
        err = abs(pde_price(model, q, PdeConfig(n, n, r_max=2.0)) - exact)
        order = "" if prev is None else f"  order {math.log2(prev / err):.2f}"
        print(f"  n = {n:4d}  error {err:.2e}{order}")
        prev = err


def gbm_routes():
    model, q = GBM(0.2, 0.3), PricingQuery(0.05, 1.0)
    lap = price(model, q, "laplace")
    closed = price(model, q, "closed")
    mc = mc_price(model, q, McConfig(n_paths=200_000, n_steps=50))
    print("\nGBM at (alpha, beta, r, tau) = (0.2, 0.3, 0.05, 1)")
    print(f"  Laplace inversion {lap.price:.12f} +- {lap.err_estimate:.1e}")
    print(f"  closed form       {closed.price:.12f} +- {closed.err_estimate:.1e}")
    print(f"  Monte Carlo       {mc.mean:.12f} +- {mc.std_error:.1e}")


def modci_conditioning():
    model = ModifiedCI(0.5, 0.4)
    print("\nModified CI, r = 0.05: reported error against maturity")
    for tau in (2.0, 1.0, 0.5, 0.35, 0.25):
        q = PricingQuery(0.05, tau)
        try:
            est = price(model, q)
            print(f"  tau = {tau:4}  price {est.price:.10f}  err {est.err_estimate:.1e}")
        except ConvergenceError as exc:
            print(f"  tau = {tau:4}  ConvergenceError: {exc}")


if __name__ == "__main__":
    pde_convergence()
    gbm_routes()
    modci_conditioning()
