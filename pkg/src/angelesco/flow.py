"""Differential flow of the conformal-map data in the pushed regimes.

With R(c) = (c/(1-c))^2 A_{c,2}/A_{c,1} and B_c = B_{c,2} - B_{c,1},

    R' = 6R(1+R) / D,   (log B_c)' = -2(1-c-cR) / D,   B_{c,2}' = c B_c',

where D = 1 - c^2 + c(2-c)R.  Integrating this system from the degenerate
edge reconstructs (A1, A2, B1, B2) without ever solving the algebraic
critical-value equations, which makes it an independent cross-check of the
curve solver.  The constraint c^{-2}A1 + (1-c)^{-2}A2 = B_c^2 is enforced
exactly by the recovery formulas instead of being integrated.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import exp, fabs, log, mp, mpf

from .curve import Geometry, find_thresholds, limit_params, solve_params
from .errors import DenominatorVanishes, DomainViolation
from .kernel import SampledPath, ode_solve
from .precision import DEFAULT_CTX, PrecisionCtx

# Seeding distance from the degenerate edge.  R, B, B2 have finite limits
# with O(c0) error; this must sit well below the 1e-6 cross-validation
# tolerance, so the edge offset is taken far smaller than the step floor of
# the algebraic continuation.
C_EDGE = mpf("1e-8")


@dataclass
class FlowState:
    c: mpf
    R: mpf
    B: mpf
    B2: mpf
    geometry: Geometry
    ctx: PrecisionCtx

    def __post_init__(self):
        if not (self.R > 0 and self.B > 0):
            raise ValueError("flow state requires R > 0 and B > 0")

    # recovery: R1 + R2 = B^2 and R2/R1 = R
    @property
    def R1(self):
        return self.B ** 2 / (1 + self.R)

    @property
    def R2(self):
        return self.B ** 2 * self.R / (1 + self.R)

    @property
    def A1(self):
        return self.c ** 2 * self.R1

    @property
    def A2(self):
        return (1 - self.c) ** 2 * self.R2

    @property
    def B1(self):
        return self.B2 - self.B


def _denominator(c, R, ctx):
    D = 1 - c * c + c * (2 - c) * R
    if D <= ctx.half_eps:
        raise DenominatorVanishes(f"flow denominator {mp.nstr(D, 8)} at c={mp.nstr(c, 8)}")
    return D


def flow_field(state: FlowState):
    """(R', (log B)', B2') at the state's c."""
    ctx = state.ctx
    with ctx.workprec():
        c, R, B = state.c, state.R, state.B
        D = _denominator(c, R, ctx)
        dR = 6 * R * (1 + R) / D
        dlogB = -2 * (1 - c - c * R) / D
        return dR, dlogB, c * B * dlogB


class FlowTable:
    """Dense-output flow solution over [c_from, c_to]."""

    def __init__(self, geometry, path: SampledPath, ctx):
        self.geometry = geometry
        self.ctx = ctx
        self._path = path

    def at(self, c) -> FlowState:
        with self.ctx.workprec():
            c = mpf(c)
            y = self._path(c)
            return FlowState(c=c, R=y[0], B=exp(y[1]), B2=y[2],
                             geometry=self.geometry, ctx=self.ctx)

    @property
    def states(self):
        return [FlowState(c=c, R=y[0], B=exp(y[1]), B2=y[2],
                          geometry=self.geometry, ctx=self.ctx)
                for c, y in zip(self._path.cs, self._path.ys)]


_FLOW_CACHE: dict = {}


def _edge_state(geometry, side, ctx):
    with ctx.workprec():
        lp = limit_params(geometry, side, ctx)
        if side == 0:
            c0 = C_EDGE
            R0 = lp.A2 / lp.r_slope
            B0 = lp.B2 - lp.B1
            return c0, [R0, log(B0), lp.B2]
        c0 = 1 - C_EDGE
        # Near c=1 the roles flip: R -> infinity like ((1-c)^-2 A2)/A1.
        R0 = lp.r_slope / lp.A1
        B0 = lp.B2 - lp.B1
        return c0, [R0, log(B0), lp.B2]


def integrate_flow(geometry: Geometry, c_from, c_to, tol=mpf("1e-10"),
                   ctx: PrecisionCtx = DEFAULT_CTX) -> FlowTable:
    """Integrate the pushed-regime flow over [c_from, c_to].

    The seed is taken at distance 1e-8 from the nearest degenerate edge
    using the explicit limit values, so the result never consults the
    algebraic solver.
    """
    with ctx.workprec():
        c_from, c_to, tol = mpf(c_from), mpf(c_to), mpf(tol)
        lo, hi = min(c_from, c_to), max(c_from, c_to)
        c_star, c_2star = find_thresholds(geometry, ctx)
        if hi < c_star and lo > 0:
            side = 0
        elif lo > c_2star and hi < 1:
            side = 1
        else:
            raise DomainViolation(
                "flow range must lie inside (0, c*) or (c**, 1)")
        key = (geometry, side, ctx.bits, tol)
        cached = _FLOW_CACHE.get(key)
        target = hi if side == 0 else lo
        if cached is None or (side == 0 and cached._path.cs[-1] < target) \
                or (side == 1 and cached._path.cs[-1] > target):
            c0, y0 = _edge_state(geometry, side, ctx)
            field = _raw_field(geometry, ctx)
            path = ode_solve(field, c0, y0, target, tol=tol, ctx=ctx)
            cached = FlowTable(geometry, path, ctx)
            _FLOW_CACHE[key] = cached
        return cached


def _raw_field(geometry, ctx):
    def field(c, y):
        R, logB, _ = y
        D = _denominator(c, R, ctx)
        dR = 6 * R * (1 + R) / D
        dlogB = -2 * (1 - c - c * R) / D
        return [dR, dlogB, c * exp(logB) * dlogB]
    return field


def beta1_prime(state: FlowState):
    """d(beta_{c,1})/dc from the flow quantities: 6 (R/R') (B'/B)^2 B."""
    with state.ctx.workprec():
        c, R, B = state.c, state.R, state.B
        D = _denominator(c, R, state.ctx)
        dR = 6 * R * (1 + R) / D
        dlogB = -2 * (1 - c - c * R) / D
        return 6 * (R / dR) * dlogB ** 2 * B


def beta1_prime_check(state: FlowState, h=mpf("1e-5")):
    """(beta'_{c,1}, |formula - centered difference|) against the solver."""
    ctx = state.ctx
    with ctx.workprec():
        pred = beta1_prime(state)
        h = mpf(h)
        bp = solve_params(state.geometry, state.c + h, ctx).beta_c1
        bm = solve_params(state.geometry, state.c - h, ctx).beta_c1
        fd = (bp - bm) / (2 * h)
        return pred, fabs(pred - fd)
