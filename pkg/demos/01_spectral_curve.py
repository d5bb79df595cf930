#!/usr/bin/env python3
"""Tour of the spectral-curve solver.

Solves the conformal-map data of the three-sheeted surface for a sweep of
ratios c on the geometry [-1,-1/3] u [1/3,1], prints the phase thresholds,
and shows the pushing effect on the moving endpoints.
"""

from mpmath import mp, mpf

from angelesco.curve import Geometry, find_thresholds, solve_params
from angelesco.precision import PrecisionCtx


def main():
    ctx = PrecisionCtx(bits=256)
    with ctx.workprec():
        g = Geometry(mpf(-1), mpf(-1) / 3, mpf(1) / 3, mpf(1))
        cs1, cs2 = find_thresholds(g, ctx)
        print(f"thresholds: c* = {mp.nstr(cs1, 20)}  c** = {mp.nstr(cs2, 20)}")
        print()
        print(f"{'c':>6} {'regime':>14} {'A1':>12} {'B1':>12} "
              f"{'beta_c1':>12} {'alpha_c2':>12}")
        for ct in ("0.05", "0.13", "0.3", "0.5", "0.7", "0.87", "0.95"):
            p = solve_params(g, mpf(ct), ctx)
            print(f"{ct:>6} {p.regime.value:>14} {mp.nstr(p.A1, 6):>12} "
                  f"{mp.nstr(p.B1, 6):>12} {mp.nstr(p.beta_c1, 6):>12} "
                  f"{mp.nstr(p.alpha_c2, 6):>12}")
        print()
        print("note how beta_c1 < beta1 = -1/3 below c* (the first support")
        print("is pushed) and alpha_c2 > alpha2 = 1/3 above c**.")


if __name__ == "__main__":
    main()
