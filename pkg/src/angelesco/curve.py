"""Spectral-curve data for a pair of disjoint real intervals.

For every ratio c in (0,1) there is a three-sheeted genus-zero surface whose
global coordinate chi satisfies

    z = chi + A1/(chi - B1) + A2/(chi - B2).

This module solves for (A1, A2, B1, B2) by damped Newton with continuation
in c, classifies the three sheets of the cubic, locates the two phase
thresholds where the support endpoints start moving, and evaluates the
derivative factor of the coordinate map.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from mpmath import fabs, im, mp, mpc, mpf, re, sqrt

from .errors import (ClassificationAmbiguous, ComplexCritical, NonConvergence,
                     OnCut, RegimeMismatch)
from .kernel import Poly, newton_solve, poly_roots
from .precision import DEFAULT_CTX, PrecisionCtx


class Regime(enum.Enum):
    PUSHED_LEFT = "pushed-left"
    BALANCED = "balanced"
    PUSHED_RIGHT = "pushed-right"


@dataclass(frozen=True)
class Geometry:
    """Two disjoint intervals [alpha1, beta1] < [alpha2, beta2]."""

    alpha1: object
    beta1: object
    alpha2: object
    beta2: object

    def __post_init__(self):
        vals = [mpf(v) if not isinstance(v, mpf) else v
                for v in (self.alpha1, self.beta1, self.alpha2, self.beta2)]
        for name, v in zip(("alpha1", "beta1", "alpha2", "beta2"), vals):
            object.__setattr__(self, name, v)
        if not (self.alpha1 < self.beta1 < self.alpha2 < self.beta2):
            raise ValueError("geometry requires alpha1 < beta1 < alpha2 < beta2")

    def interval(self, i: int):
        return (self.alpha1, self.beta1) if i == 1 else (self.alpha2, self.beta2)

    def mirrored(self) -> "Geometry":
        return Geometry(-self.beta2, -self.alpha2, -self.beta1, -self.alpha1)


@dataclass
class CurveParams:
    """Conformal-map data of the surface at ratio c."""

    c: mpf
    A1: mpf
    A2: mpf
    B1: mpf
    B2: mpf
    regime: Regime
    beta_c1: mpf
    alpha_c2: mpf
    geometry: Geometry
    ctx: PrecisionCtx = field(default_factory=lambda: DEFAULT_CTX)

    @property
    def chi_star(self) -> mpf:
        return (1 - self.c) * self.B1 + self.c * self.B2

    @property
    def B(self) -> mpf:
        return self.B2 - self.B1

    def support(self, i: int):
        """Equilibrium support on interval i (moving endpoints applied)."""
        if i == 1:
            return (self.geometry.alpha1, self.beta_c1)
        return (self.alpha_c2, self.geometry.beta2)

    def z_of_chi(self, chi):
        return chi + self.A1 / (chi - self.B1) + self.A2 / (chi - self.B2)

    def dz_of_chi(self, chi):
        return 1 - self.A1 / (chi - self.B1) ** 2 - self.A2 / (chi - self.B2) ** 2

    def curve_indicator(self, chi):
        """A1/|chi-B1|^2 + A2/|chi-B2|^2; equals 1 on the cut images."""
        return (self.A1 / abs(chi - self.B1) ** 2
                + self.A2 / abs(chi - self.B2) ** 2)


@dataclass
class LimitParams(CurveParams):
    """Degenerate-parameter limit (c -> 0 or 1) with the quadratic slope of
    the vanishing residue."""

    r_slope: mpf = None


def w_map(interval, z, side: str = "off", ctx: PrecisionCtx = DEFAULT_CTX):
    """sqrt((z-a)(z-b)) with the branch behaving like z at infinity.

    On the open cut the side flag selects the trace: w_+ = +i sqrt((x-a)(b-x)).
    """
    a, b = interval
    with ctx.workprec():
        a, b = mpf(a), mpf(b)
        if side in ("+", "-"):
            x = mpf(re(z))
            if not (a < x < b):
                raise OnCut("side flag only valid for points on the open cut")
            mag = sqrt((x - a) * (b - x))
            return mpc(0, mag) if side == "+" else mpc(0, -mag)
        if im(z) == 0 and a <= re(z) <= b:
            raise OnCut("on-cut evaluation requires a side flag")
        # Product of principal roots: cuts on (-inf, a] and (-inf, b] cancel
        # below a, leaving a single cut on [a, b] and w ~ z at infinity.
        return sqrt(mpc(z) - a) * sqrt(mpc(z) - b)


def phi_map(interval, z, ctx: PrecisionCtx = DEFAULT_CTX):
    """Exterior conformal map of the interval complement onto |w| > (b-a)/4."""
    a, b = interval
    with ctx.workprec():
        a, b = mpf(a), mpf(b)
        return (mpc(z) - (a + b) / 2 + w_map(interval, z, ctx=ctx)) / 2


def limit_params(geometry: Geometry, at: int, ctx: PrecisionCtx = DEFAULT_CTX) -> LimitParams:
    """Parameter limits as c -> 0 (at=0) or c -> 1 (at=1).

    The vanishing A is reported through its quadratic slope ``r_slope``:
    at c -> 0 this is the limit of A1/c^2, equal to
    phi_2(alpha1)^2 - ((beta2-alpha2)/4)^2.
    """
    with ctx.workprec():
        if at == 0:
            a2, b2 = geometry.alpha2, geometry.beta2
            A2 = ((b2 - a2) / 4) ** 2
            B2 = (b2 + a2) / 2
            phi = re(phi_map((a2, b2), geometry.alpha1, ctx))
            B1 = B2 + phi
            slope = phi ** 2 - A2
            return LimitParams(c=mpf(0), A1=mpf(0), A2=A2, B1=B1, B2=B2,
                               regime=Regime.PUSHED_LEFT,
                               beta_c1=geometry.alpha1, alpha_c2=geometry.alpha2,
                               geometry=geometry, ctx=ctx, r_slope=slope)
        if at == 1:
            a1, b1 = geometry.alpha1, geometry.beta1
            A1 = ((b1 - a1) / 4) ** 2
            B1 = (b1 + a1) / 2
            phi = re(phi_map((a1, b1), geometry.beta2, ctx))
            B2 = B1 + phi
            slope = phi ** 2 - A1
            return LimitParams(c=mpf(1), A1=A1, A2=mpf(0), B1=B1, B2=B2,
                               regime=Regime.PUSHED_RIGHT,
                               beta_c1=geometry.beta1, alpha_c2=geometry.beta2,
                               geometry=geometry, ctx=ctx, r_slope=slope)
        raise ValueError("'at' must be 0 or 1")


def _quartic_roots(A1, A2, B1, B2, ctx):
    """Real critical points of z(chi), sorted ascending."""
    # (u-B1)^2 (u-B2)^2 - A1 (u-B2)^2 - A2 (u-B1)^2 as ascending coeffs.
    def sq(r):  # (u - r)^2
        return [r * r, -2 * r, mpf(1)]

    def mul(p, q):
        out = [mpf(0)] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
        return out

    s1, s2 = sq(B1), sq(B2)
    coeffs = mul(s1, s2)
    for k in range(3):
        coeffs[k] -= A1 * s2[k] + A2 * s1[k]
    roots = poly_roots(Poly(coeffs, ctx))
    scale = max(fabs(B1), fabs(B2), mpf(1))
    out = []
    for r in roots:
        if fabs(im(r)) > ctx.third_eps * scale:
            raise ComplexCritical(f"critical point {r} is not real")
        out.append(re(r))
    return sorted(out)


class CurveSolver:
    """Continuation solver for one geometry; caches thresholds and anchors."""

    def __init__(self, geometry: Geometry, ctx: PrecisionCtx = DEFAULT_CTX):
        self.geometry = geometry
        self.ctx = ctx
        self._anchors = {Regime.PUSHED_LEFT: [], Regime.BALANCED: [],
                         Regime.PUSHED_RIGHT: []}
        self._thresholds = None
        self._c_lo = mpf("1e-3")

    # residuals ---------------------------------------------------------

    def _unpack(self, c, v):
        R1, R2, B1, B2 = v
        A1 = c * c * R1
        A2 = (1 - c) ** 2 * R2
        return A1, A2, B1, B2

    def _residual(self, c, v, regime):
        g = self.geometry
        A1, A2, B1, B2 = self._unpack(c, v)
        crit = _quartic_roots(A1, A2, B1, B2, self.ctx)
        zs = [crit[k] + A1 / (crit[k] - B1) + A2 / (crit[k] - B2) for k in range(4)]
        if regime is Regime.BALANCED:
            return [zs[0] - g.alpha1, zs[1] - g.beta1, zs[2] - g.alpha2, zs[3] - g.beta2]
        acbc = v[0] + v[1] - (B2 - B1) ** 2
        if regime is Regime.PUSHED_LEFT:
            return [zs[0] - g.alpha1, zs[2] - g.alpha2, zs[3] - g.beta2, acbc]
        return [zs[0] - g.alpha1, zs[1] - g.beta1, zs[3] - g.beta2, acbc]

    def _solve_at(self, c, seed, regime):
        with self.ctx.workprec():
            F = lambda v: self._residual(c, v, regime)
            return newton_solve(F, seed, tol=self.ctx.half_eps, ctx=self.ctx)

    # continuation ------------------------------------------------------

    def _seed_near_edge(self, at):
        lp = limit_params(self.geometry, at, self.ctx)
        if at == 0:
            # (R1, R2, B1, B2) at the left edge.
            return [lp.r_slope, lp.A2, lp.B1, lp.B2]
        return [lp.A1, lp.r_slope, lp.B1, lp.B2]

    def _nearest_anchor(self, c, regime):
        anchors = self._anchors[regime]
        if not anchors:
            return None
        return min(anchors, key=lambda a: fabs(a[0] - c))

    def _add_anchor(self, c, v, regime):
        anchors = self._anchors[regime]
        for a in anchors:
            if a[0] == c:
                return
        anchors.append((c, list(v)))

    def _continue_to(self, c_target, regime, start=None):
        """Walk from the nearest anchor (or edge seed) to c_target."""
        with self.ctx.workprec():
            c_target = mpf(c_target)
            if start is None:
                start = self._nearest_anchor(c_target, regime)
            if start is None:
                if regime is Regime.PUSHED_LEFT:
                    c0, seed = self._c_lo, self._seed_near_edge(0)
                elif regime is Regime.PUSHED_RIGHT:
                    c0, seed = 1 - self._c_lo, self._seed_near_edge(1)
                else:
                    raise NonConvergence("balanced solves need a threshold anchor")
                start = (c0, self._solve_at(c0, seed, regime))
                self._add_anchor(c0, start[1], regime)
            c_cur, v = mpf(start[0]), list(start[1])
            step = mpf("1e-2")
            floor = mpf(2) ** -20
            while c_cur != c_target:
                h = c_target - c_cur
                if fabs(h) > step:
                    h = step if h > 0 else -step
                try:
                    v_new = self._solve_at(c_cur + h, v, regime)
                except NonConvergence:
                    step /= 2
                    if step < floor:
                        raise NonConvergence(
                            f"continuation stalled near c={mp.nstr(c_cur, 10)}")
                    continue
                c_cur += h
                v = v_new
                self._add_anchor(c_cur, v, regime)
            return v

    # public ------------------------------------------------------------

    def thresholds(self):
        """(c_star, c_double_star): where the moving endpoints reach beta1/alpha2."""
        if self._thresholds is not None:
            return self._thresholds
        with self.ctx.workprec():
            c_star = self._find_threshold(Regime.PUSHED_LEFT)
            c_2star = 1 - self._mirror_solver()._find_threshold(Regime.PUSHED_LEFT)
            if not c_star < c_2star:
                raise NonConvergence("threshold ordering failed")
            self._thresholds = (c_star, c_2star)
            return self._thresholds

    def _mirror_solver(self):
        if not hasattr(self, "_mirror"):
            self._mirror = CurveSolver(self.geometry.mirrored(), self.ctx)
        return self._mirror

    def _moving_endpoint_gap(self, c):
        """beta_{c,1} - beta1 from a pushed-left solve."""
        v = self._continue_to(c, Regime.PUSHED_LEFT)
        A1, A2, B1, B2 = self._unpack(c, v)
        chi_star = (1 - c) * B1 + c * B2
        beta_c1 = chi_star + A1 / (chi_star - B1) + A2 / (chi_star - B2)
        return beta_c1 - self.geometry.beta1

    def _find_threshold(self, regime):
        # Scan upward for a sign change of the endpoint gap, then bisect
        # and polish by secant.
        lo, glo = self._c_lo, self._moving_endpoint_gap(self._c_lo)
        if glo >= 0:
            raise NonConvergence("endpoint gap not negative near c=0")
        hi = None
        c = lo
        while c < mpf("0.98"):
            c = min(c + mpf("0.05"), mpf("0.98"))
            try:
                g = self._moving_endpoint_gap(c)
            except NonConvergence:
                hi, ghi = c, None
                break
            if g >= 0:
                hi, ghi = c, g
                break
            lo, glo = c, g
        if hi is None:
            raise NonConvergence("no threshold found in (0,1)")
        for _ in range(40):
            mid = (lo + hi) / 2
            try:
                gmid = self._moving_endpoint_gap(mid)
            except NonConvergence:
                hi = mid
                continue
            if gmid >= 0:
                hi, ghi = mid, gmid
            else:
                lo, glo = mid, gmid
            if ghi is not None and hi - lo < mpf("1e-6"):
                break
        # Secant polish on the smooth gap function.
        c0, g0 = lo, glo
        c1, g1 = hi, ghi if ghi is not None else self._moving_endpoint_gap(hi)
        tol = self.ctx.half_eps * max(fabs(self.geometry.beta1), mpf(1))
        for _ in range(80):
            if g1 == g0:
                break
            c2 = c1 - g1 * (c1 - c0) / (g1 - g0)
            if not (mpf(0) < c2 < mpf(1)):
                break
            g2 = self._moving_endpoint_gap(c2)
            c0, g0, c1, g1 = c1, g1, c2, g2
            if fabs(g1) <= tol:
                break
        return c1

    def regime_of(self, c):
        c_star, c_2star = self.thresholds()
        if c < c_star:
            return Regime.PUSHED_LEFT
        if c > c_2star:
            return Regime.PUSHED_RIGHT
        return Regime.BALANCED

    def _ensure_balanced_anchor(self):
        if self._anchors[Regime.BALANCED]:
            return
        c_star, _ = self.thresholds()
        v = self._continue_to(c_star, Regime.PUSHED_LEFT)
        self._add_anchor(c_star, v, Regime.BALANCED)

    def solve(self, c) -> CurveParams:
        with self.ctx.workprec():
            c = mpf(c)
            if not (0 < c < 1):
                raise ValueError("c must lie in (0,1)")
            regime = self.regime_of(c)
            if regime is Regime.BALANCED:
                self._ensure_balanced_anchor()
            v = self._continue_to(c, regime)
            return self._package(c, v, regime)

    def _package(self, c, v, regime):
        g = self.geometry
        A1, A2, B1, B2 = self._unpack(c, v)
        if not (A1 > 0 and A2 > 0 and B2 > B1):
            raise RegimeMismatch("parameter positivity/ordering violated")
        beta_c1, alpha_c2 = g.beta1, g.alpha2
        chi_star = (1 - c) * B1 + c * B2
        if regime is not Regime.BALANCED:
            z_star = chi_star + A1 / (chi_star - B1) + A2 / (chi_star - B2)
            if regime is Regime.PUSHED_LEFT:
                beta_c1 = z_star
                if not (g.alpha1 < beta_c1 <= g.beta1 + self.ctx.third_eps):
                    raise RegimeMismatch("moving endpoint outside [alpha1, beta1]")
            else:
                alpha_c2 = z_star
                if not (g.alpha2 - self.ctx.third_eps <= alpha_c2 < g.beta2):
                    raise RegimeMismatch("moving endpoint outside [alpha2, beta2]")
        return CurveParams(c=c, A1=A1, A2=A2, B1=B1, B2=B2, regime=regime,
                           beta_c1=beta_c1, alpha_c2=alpha_c2,
                           geometry=g, ctx=self.ctx)


_SOLVERS: dict = {}


def solver_for(geometry: Geometry, ctx: PrecisionCtx = DEFAULT_CTX) -> CurveSolver:
    key = (geometry, ctx)
    if key not in _SOLVERS:
        _SOLVERS[key] = CurveSolver(geometry, ctx)
    return _SOLVERS[key]


def solve_params(geometry: Geometry, c, ctx: PrecisionCtx = DEFAULT_CTX) -> CurveParams:
    return solver_for(geometry, ctx).solve(c)


def find_thresholds(geometry: Geometry, ctx: PrecisionCtx = DEFAULT_CTX):
    return solver_for(geometry, ctx).thresholds()


def critical_points(params: CurveParams):
    """The four real critical points of z(chi), ascending."""
    return _quartic_roots(params.A1, params.A2, params.B1, params.B2, params.ctx)


def special_point(params: CurveParams, c=None):
    """chi* = (1-c)B1 + cB2 and its image z(chi*)."""
    with params.ctx.workprec():
        chi = params.chi_star
        return chi, params.z_of_chi(chi)


def _cubic_chi_roots(params: CurveParams, z):
    """Roots of (chi-z)(chi-B1)(chi-B2) + A1(chi-B2) + A2(chi-B1)."""
    A1, A2, B1, B2 = params.A1, params.A2, params.B1, params.B2
    z = mpc(z)
    c2 = -(z + B1 + B2)
    c1 = z * (B1 + B2) + B1 * B2 + A1 + A2
    c0 = -(z * B1 * B2 + A1 * B2 + A2 * B1)
    # Double-precision seeds refined by simultaneous Newton steps.
    try:
        seeds = np.roots(np.array([1.0, complex(c2), complex(c1), complex(c0)]))
        roots = [mpc(s) for s in seeds]
        ok = len(roots) == 3 and all(np.isfinite([s.real, s.imag]).all() for s in seeds)
    except Exception:
        ok = False
    if not ok:
        roots = [mpc(k) for k in range(3)]
    p = lambda u: ((u + c2) * u + c1) * u + c0
    dp = lambda u: (3 * u + 2 * c2) * u + c1
    for _ in range(64):
        new = []
        moved = mpf(0)
        for i, r in enumerate(roots):
            pr = p(r)
            dpr = dp(r)
            s = sum(1 / (r - rj) for j, rj in enumerate(roots) if j != i and rj != r)
            denom = dpr - pr * s
            step = pr / denom if denom != 0 else pr / (dpr if dpr != 0 else mpf(1))
            new.append(r - step)
            moved = max(moved, fabs(step))
        roots = new
        scale = max(fabs(z), fabs(B1), fabs(B2), mpf(1))
        if moved <= mpf(2) ** (-params.ctx.work_bits + 8) * scale:
            break
    return roots


def sheet_values(params: CurveParams, z, side: str = "auto"):
    """chi on the three sheets over z: (chi^(0), chi^(1), chi^(2)).

    The outer sheet is the root outside both Jordan curve components of the
    cut image; the root inside the component around B_i goes to sheet i.  On
    a cut, ``side`` selects the trace by the sign of Im chi^(0).
    """
    ctx = params.ctx
    with ctx.workprec():
        if mp.isinf(z):
            return (mp.inf, params.B1, params.B2)
        z = mpc(z)
        roots = _cubic_chi_roots(params, z)
        scale = max(fabs(params.B1), fabs(params.B2), mpf(1))
        tol = ctx.third_eps * scale
        for i in range(3):
            for j in range(i + 1, 3):
                if fabs(roots[i] - roots[j]) < tol:
                    raise ClassificationAmbiguous(
                        "two sheet values coincide (branch point?)")
        cut = _on_cut(params, z)
        if cut is not None:
            if side not in ("+", "-"):
                raise OnCut("point on a cut requires side '+' or '-'")
            return _classify_on_cut(params, roots, cut, side)
        return _classify_off_cut(params, roots)


def _on_cut(params, z):
    """Index (1 or 2) of the open cut containing real z, else None."""
    if im(z) != 0:
        return None
    x = re(z)
    a1, b1 = params.support(1)
    a2, b2 = params.support(2)
    if a1 < x < b1:
        return 1
    if a2 < x < b2:
        return 2
    return None


def _classify_off_cut(params, roots):
    scored = []
    for r in roots:
        f1 = params.A1 / abs(r - params.B1) ** 2
        f2 = params.A2 / abs(r - params.B2) ** 2
        scored.append((r, f1, f2))
    outer = min(scored, key=lambda t: t[1] + t[2])
    rest = [t for t in scored if t[0] is not outer[0]]
    if rest[0][1] >= rest[0][2]:
        s1, s2 = rest[0][0], rest[1][0]
    else:
        s1, s2 = rest[1][0], rest[0][0]
    return (outer[0], s1, s2)


def _classify_on_cut(params, roots, cut, side):
    ctx = params.ctx
    conj_pair = [r for r in roots if fabs(im(r)) > ctx.third_eps]
    real_root = [r for r in roots if fabs(im(r)) <= ctx.third_eps]
    if len(conj_pair) != 2 or len(real_root) != 1:
        raise ClassificationAmbiguous("unexpected root pattern on cut")
    upper = conj_pair[0] if im(conj_pair[0]) > 0 else conj_pair[1]
    lower = conj_pair[0] if im(conj_pair[0]) <= 0 else conj_pair[1]
    chi0 = upper if side == "+" else lower
    chii = lower if side == "+" else upper
    v = real_root[0]
    if cut == 1:
        return (chi0, chii, v)
    return (chi0, v, chii)


def pi_value(params: CurveParams, sheet: int, z, side: str = "auto"):
    """Derivative of the sheet pull-back: 1/z'(chi^(sheet)(z))."""
    with params.ctx.workprec():
        if mp.isinf(z):
            return mpf(1) if sheet == 0 else mpf(0)
        chis = sheet_values(params, z, side)
        return 1 / params.dz_of_chi(chis[sheet])
