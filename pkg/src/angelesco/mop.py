"""Brute-force multiple-orthogonality oracle.

Everything here is computed from moments in exact-ish multiprecision:
type II polynomials from the monic moment system, type I forms from the
dual system, h-constants, nearest-neighbor recurrence coefficients, and
second-kind functions.  No asymptotic input whatsoever — this is the
ground truth the predictions are compared against.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from mpmath import fabs, im, mp, mpc, mpf, pi, re

from .errors import DivisionByZero, NonConvergence, Singular
from .kernel import Poly, integrate_interval, poly_roots, solve_linear
from .precision import DEFAULT_CTX, PrecisionCtx
from .surface import E1, E2, MultiIndex
from .szego import WeightSpec

LADDER_CAP = 2048


@dataclass
class MomentTable:
    weight: WeightSpec
    ctx: PrecisionCtx
    moments: list = field(default_factory=list)

    def m(self, k: int):
        while len(self.moments) <= k:
            self.moments.append(self._compute(len(self.moments)))
        return self.moments[k]

    def _compute(self, k):
        w = self.weight
        a, b = w.interval
        with self.ctx.workprec():
            if w.kind in ("positive-poly", "complex-poly"):
                # exact antiderivative of x^k * p(x)
                total = mpf(0)
                for j, cj in enumerate(w.coeffs):
                    total += cj * (b ** (k + j + 1) - a ** (k + j + 1)) / (k + j + 1)
                return total
            return integrate_interval(lambda x: x ** k * w.v(x), a, b, self.ctx)


_MOMENTS: dict = {}


def compute_moments(weight: WeightSpec, kmax: int = 0,
                    ctx: PrecisionCtx = DEFAULT_CTX) -> MomentTable:
    key = (weight, ctx.bits)
    if key not in _MOMENTS:
        _MOMENTS[key] = MomentTable(weight, ctx)
    t = _MOMENTS[key]
    t.m(kmax)
    return t


@dataclass
class MopResult:
    n: MultiIndex
    P: Poly
    A1_poly: Poly
    A2_poly: Poly
    h: tuple
    normal: bool
    ill_conditioned: bool = False


def _type2_system(m1: MomentTable, m2: MomentTable, n: MultiIndex):
    N = n.size
    A, rhs = [], []
    for mt, ni in ((m1, n.n1), (m2, n.n2)):
        for l in range(ni):
            A.append([mt.m(k + l) for k in range(N)])
            rhs.append(-mt.m(N + l))
    return A, rhs


def type2(m1: MomentTable, m2: MomentTable, n: MultiIndex,
          ctx: PrecisionCtx = DEFAULT_CTX) -> Poly:
    """Monic type II polynomial P_n of degree |n|."""
    if n.size == 0:
        return Poly([mpf(1)], ctx)
    coeffs = _ladder(lambda c: _type2_system(compute_moments(m1.weight, 2 * n.size, c),
                                             compute_moments(m2.weight, 2 * n.size, c), n),
                     ctx)
    with ctx.workprec():
        return Poly(list(coeffs) + [mpf(1)], ctx)


def _type1_system(m1: MomentTable, m2: MomentTable, n: MultiIndex):
    N = n.size
    A, rhs = [], []
    for l in range(N):
        row = [m1.m(l + j) for j in range(n.n1)] + [m2.m(l + j) for j in range(n.n2)]
        A.append(row)
        rhs.append(mpf(1) if l == N - 1 else mpf(0))
    return A, rhs


def type1(m1: MomentTable, m2: MomentTable, n: MultiIndex,
          ctx: PrecisionCtx = DEFAULT_CTX):
    """Type I polynomials (A^{(1)}, A^{(2)}) normalized by a unit top moment."""
    sol = _ladder(lambda c: _type1_system(compute_moments(m1.weight, 2 * n.size, c),
                                          compute_moments(m2.weight, 2 * n.size, c), n),
                  ctx)
    with ctx.workprec():
        a1 = list(sol[:n.n1]) or [mpf(0)]
        a2 = list(sol[n.n1:]) or [mpf(0)]
        return Poly(a1, ctx), Poly(a2, ctx)


def _ladder(system_at, ctx: PrecisionCtx):
    """Solve at P and 2P bits; agreement to P/2 bits or double and retry."""
    bits = ctx.bits
    while True:
        lo = PrecisionCtx(bits=bits, guard_bits=ctx.guard_bits)
        hi = lo.doubled()
        with lo.workprec():
            A, rhs = system_at(lo)
            x_lo = solve_linear(A, rhs, lo)
        with hi.workprec():
            A, rhs = system_at(hi)
            x_hi = solve_linear(A, rhs, hi)
            scale = max([fabs(v) for v in x_hi] + [mpf(1)])
            err = max(fabs(a - b) for a, b in zip(x_lo, x_hi)) / scale
            if err <= mpf(2) ** (-bits // 2):
                return x_hi
        if 2 * bits > LADDER_CAP:
            raise NonConvergence("moment system ill-conditioned beyond ladder cap")
        bits *= 2


def h_constant(mt: MomentTable, P: Poly, n: MultiIndex, i: int):
    """h_{n,i} = int P_n(x) x^{n_i} d mu_i."""
    ni = n.n1 if i == 1 else n.n2
    with mt.ctx.workprec():
        return sum(ck * mt.m(k + ni) for k, ck in enumerate(P.coeffs))


def recurrence_a(h_parent, h_child):
    """a_{n,i} = h_{n,i} / h_{n-e_i,i}."""
    if h_parent == 0:
        raise DivisionByZero("parent h vanishes: non-normal neighbor")
    return h_child / h_parent


def recurrence_b(P_n: Poly, P_next: Poly):
    """b_{n,i} from sub-leading coefficients of P_n and P_{n+e_i}."""
    def sub(p):
        return p.coeffs[p.degree - 1] if p.degree >= 1 else mpf(0)
    return sub(P_n) - sub(P_next)


def second_kind(P: Poly, weight: WeightSpec, z, ctx: PrecisionCtx = DEFAULT_CTX,
                rel_tol=None):
    """R(z) = (1/2 pi i) int P(x) rho(x) / (x - z) dx."""
    a, b = weight.interval
    with ctx.workprec():
        z = mpc(z)
        if im(z) == 0 and a <= re(z) <= b:
            raise ValueError("second-kind evaluation on the interval")
        f = lambda x: P(x) * weight.v(x) / (x - z)
        # rho = -2 pi i v, so the prefactor cancels to -1
        return -integrate_interval(f, a, b, ctx, rel_tol=rel_tol)


class MopSolver:
    """Caches oracle solves for one weight pair."""

    def __init__(self, weights, ctx: PrecisionCtx = DEFAULT_CTX):
        self.weights = tuple(weights)
        self.ctx = ctx
        self.m1 = compute_moments(self.weights[0], 0, ctx)
        self.m2 = compute_moments(self.weights[1], 0, ctx)
        self._results = {}

    def solve(self, n: MultiIndex) -> MopResult:
        got = self._results.get(n)
        if got is not None:
            return got
        normal = True
        try:
            P = type2(self.m1, self.m2, n, self.ctx)
            if n.n1 >= 1 or n.n2 >= 1:
                a1, a2 = type1(self.m1, self.m2, n, self.ctx)
            else:
                a1 = a2 = Poly([mpf(0)], self.ctx)
        except Singular:
            normal = False
            P = a1 = a2 = Poly([mpf(0)], self.ctx)
        with self.ctx.workprec():
            h = (h_constant(self.m1, P, n, 1), h_constant(self.m2, P, n, 2))
        res = MopResult(n=n, P=P, A1_poly=a1, A2_poly=a2, h=h, normal=normal)
        self._results[n] = res
        return res

    def a(self, n: MultiIndex, i: int):
        with self.ctx.workprec():
            parent = self.solve(n - (E1 if i == 1 else E2))
            child = self.solve(n)
            return recurrence_a(parent.h[i - 1], child.h[i - 1])

    def b(self, n: MultiIndex, i: int):
        with self.ctx.workprec():
            here = self.solve(n)
            nxt = self.solve(n + (E1 if i == 1 else E2))
            return recurrence_b(here.P, nxt.P)

    def recurrence_residual(self, n: MultiIndex):
        """Coefficientwise residual of x P_n = P_{n+e_i} + b P_n + sum a P_{n-e_j}.

        Returns the max over i in {1,2}.
        """
        with self.ctx.workprec():
            worst = mpf(0)
            P = self.solve(n).P
            xP = Poly([mpf(0)] + list(P.coeffs), self.ctx)
            for i in (1, 2):
                e = E1 if i == 1 else E2
                # x P - P_{n+e_i} - b_{n,i} P - a_{n,1} P_{n-e1} - a_{n,2} P_{n-e2}
                coeffs = list(xP.coeffs)
                def axpy(alpha, poly):
                    for k, ck in enumerate(poly.coeffs):
                        coeffs[k] -= alpha * ck
                axpy(mpf(1), self.solve(n + e).P)
                axpy(self.b(n, i), P)
                if n.n1 >= 1:
                    axpy(self.a(n, 1), self.solve(n - E1).P)
                if n.n2 >= 1:
                    axpy(self.a(n, 2), self.solve(n - E2).P)
                worst = max(worst, max(fabs(ck) for ck in coeffs))
            return worst

    def zero_counts(self, n: MultiIndex, geometry):
        """(count in (alpha1,beta1), count in (alpha2,beta2)) of P_n zeros."""
        with self.ctx.workprec():
            roots = poly_roots(self.solve(n).P)
            tol = self.ctx.third_eps
            k1 = sum(1 for r in roots
                     if fabs(im(r)) < tol and geometry.alpha1 < re(r) < geometry.beta1)
            k2 = sum(1 for r in roots
                     if fabs(im(r)) < tol and geometry.alpha2 < re(r) < geometry.beta2)
            return k1, k2


def emit_coefficients_csv(path, poly: Poly, digits: int = 0):
    """index,real,imag rows; digits=0 emits full precision."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["index", "real", "imag"])
        for k, c in enumerate(poly.coeffs):
            c = mpc(c)
            d = digits or mp.dps
            wr.writerow([k, mp.nstr(re(c), d), mp.nstr(im(c), d)])
