#!/usr/bin/env python3
"""Strong asymptotics vs. the moment oracle.

Evaluates the predicted polynomial and recurrence-coefficient limits
against brute-force multiple orthogonal polynomials along the diagonal
multi-index schedule, showing the errors shrink as min(n1, n2) grows.
"""

from mpmath import mp, mpc, mpf

from angelesco.curve import Geometry, solve_params
from angelesco.mop import MopSolver
from angelesco.precision import PrecisionCtx
from angelesco.surface import MultiIndex
from angelesco.szego import lebesgue
from angelesco.verify import predictor_for


def main():
    ctx = PrecisionCtx(bits=256)
    with ctx.workprec():
        g = Geometry(mpf(-1), mpf(-1) / 3, mpf(1) / 3, mpf(1))
        weights = (lebesgue(g.interval(1)), lebesgue(g.interval(2)))
        oracle = MopSolver(weights, ctx)
        z = mpc(2)
        print(f"{'k':>3} {'|P/pred - 1| at 2':>20} {'|a/A - 1|':>14} "
              f"{'|b/B - 1|':>14}")
        for k in (2, 4, 8, 12):
            n = MultiIndex(k, k)
            pred = predictor_for(g, weights, n.ratio(ctx), ctx)
            perr = abs(oracle.solve(n).P(z) / pred.P_full(n, z) - 1)
            p_here = solve_params(g, n.ratio(ctx), ctx)
            aerr = abs(oracle.a(n, 1) / p_here.A1 - 1)
            p_next = solve_params(g, MultiIndex(k + 1, k).ratio(ctx), ctx)
            berr = abs(oracle.b(n, 1) / p_next.B1 - 1)
            print(f"{k:>3} {mp.nstr(perr, 6):>20} {mp.nstr(aerr, 6):>14} "
                  f"{mp.nstr(berr, 6):>14}")
        print()
        print("each column shrinks roughly like 1/k, as the theorems predict.")


if __name__ == "__main__":
    main()
