"""Multiprecision numeric substrate.

Polynomials, Gauss-Legendre quadrature with node doubling, closed-contour
panels, partial-pivot linear solving, damped Newton, an embedded
Runge-Kutta pair with dense output, and Aberth root finding.  Everything is
pure and parametrized by a :class:`~angelesco.precision.PrecisionCtx`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from mpmath import cos, fabs, mp, mpc, mpf, pi

from .errors import NonConvergence, Singular, StepUnderflow
from .precision import DEFAULT_CTX, PrecisionCtx

NODE_CAP = 1 << 16


@dataclass
class Poly:
    """Dense polynomial, coefficients in ascending degree order."""

    coeffs: list
    precision: PrecisionCtx = field(default_factory=lambda: DEFAULT_CTX)

    def __post_init__(self):
        with self.precision.workprec():
            self.coeffs = [mpc(c) if isinstance(c, (complex, mpc)) else mpf(c) if not isinstance(c, (mpf, mpc)) else c
                           for c in self.coeffs]
        self.trim()

    def trim(self):
        while len(self.coeffs) > 1 and self.coeffs[-1] == 0:
            self.coeffs.pop()

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        if self.degree == 0:
            return Poly([mpf(0)], self.precision)
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.precision)

    def monic(self) -> "Poly":
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs], self.precision)

    def norm(self):
        return max(fabs(c) for c in self.coeffs)


@dataclass
class QuadratureRule:
    nodes: list
    weights: list


_GL_CACHE: dict = {}


def gauss_legendre(n: int, ctx: PrecisionCtx = DEFAULT_CTX) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1], exact for degree <= 2n-1."""
    key = (n, ctx.work_bits)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    with ctx.workprec():
        nodes, weights = [], []
        tol = mpf(2) ** (-ctx.work_bits + 8)
        for k in range(1, n + 1):
            # Chebyshev initial guess, then Newton on P_n.
            x = cos(pi * (k - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for j in range(2, n + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                if n == 1:
                    p1, p0 = x, mpf(1)
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if fabs(dx) < tol:
                    break
            p0, p1 = mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            if n == 1:
                p1, p0 = x, mpf(1)
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(-x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        rule = QuadratureRule(nodes, weights)
    _GL_CACHE[key] = rule
    return rule


def _gl_apply(f, a, b, n, ctx):
    rule = gauss_legendre(n, ctx)
    m = (a + b) / 2
    r = (b - a) / 2
    total = mpf(0)
    for x, w in zip(rule.nodes, rule.weights):
        total += w * f(m + r * x)
    return r * total


def integrate_interval(f, a, b, ctx: PrecisionCtx = DEFAULT_CTX, *,
                       chebyshev: bool = False, rel_tol=None):
    """Integrate f over [a, b] with Gauss-Legendre node doubling.

    With ``chebyshev=True`` the substitution x = m + r*cos(theta) is applied
    first, taming inverse-square-root endpoint singularities.
    """
    with ctx.workprec():
        a, b = mpf(a), mpf(b)
        if rel_tol is None:
            rel_tol = ctx.half_eps
        if chebyshev:
            m = (a + b) / 2
            r = (b - a) / 2
            g = f
            f = lambda th: g(m + r * cos(th)) * r * mp.sin(th)
            a, b = mpf(0), +pi
        n = 16
        prev = _gl_apply(f, a, b, n, ctx)
        while n <= NODE_CAP:
            n *= 2
            cur = _gl_apply(f, a, b, n, ctx)
            scale = max(fabs(cur), mpf(1) if cur == 0 else fabs(cur))
            if fabs(cur - prev) <= rel_tol * max(scale, mpf("1e-30")):
                return cur
            prev = cur
        raise NonConvergence(f"interval quadrature did not stabilize below {NODE_CAP} nodes")


def integrate_closed_contour(f, path, n: int = 64, *, path_deriv=None,
                             singular_params=(), ctx: PrecisionCtx = DEFAULT_CTX,
                             rel_tol=None):
    """Integrate f(z) dz over a closed path parametrized on [0, 1).

    Trapezoid panels with doubling; ``singular_params`` lists parameter values
    where f has integrable log singularities, handled by splitting panels
    symmetrically about them.
    """
    with ctx.workprec():
        if rel_tol is None:
            rel_tol = ctx.half_eps
        h = mpf(2) ** -30

        def deriv(t):
            if path_deriv is not None:
                return path_deriv(t)
            return (path(t + h) - path(t - h)) / (2 * h)

        def panel_value(m):
            # Split [0,1) at singular parameters; midpoint rule per panel
            # (periodic trapezoid == midpoint offset; midpoint avoids the
            # singular parameters themselves).
            cuts = sorted(set([mpf(0)] + [mpf(s) % 1 for s in singular_params] + [mpf(1)]))
            total = mpc(0)
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                if hi <= lo:
                    continue
                step = (hi - lo) / m
                for j in range(m):
                    t = lo + (j + mpf(1) / 2) * step
                    total += f(path(t)) * deriv(t) * step
            return total

        m = max(16, n)
        prev = panel_value(m)
        while m <= NODE_CAP:
            m *= 2
            cur = panel_value(m)
            if fabs(cur - prev) <= rel_tol * max(fabs(cur), mpf(1)):
                return cur
            prev = cur
        raise NonConvergence("closed-contour quadrature did not stabilize")


def solve_linear(A, b, ctx: PrecisionCtx = DEFAULT_CTX):
    """Partial-pivot Gaussian elimination for small dense systems."""
    with ctx.workprec():
        n = len(A)
        M = [list(row) + [bi] for row, bi in zip(A, b)]
        floor = mpf(2) ** (-ctx.bits + ctx.guard_bits)
        scale = max(max(fabs(e) for e in row[:-1]) for row in M)
        if scale == 0:
            raise Singular("zero matrix")
        for col in range(n):
            piv = max(range(col, n), key=lambda r: fabs(M[r][col]))
            if fabs(M[piv][col]) <= floor * scale:
                raise Singular(f"pivot underflow at column {col}")
            M[col], M[piv] = M[piv], M[col]
            pv = M[col][col]
            for r in range(col + 1, n):
                fac = M[r][col] / pv
                if fac == 0:
                    continue
                for c in range(col, n + 1):
                    M[r][c] -= fac * M[col][c]
        x = [mpf(0)] * n
        for r in range(n - 1, -1, -1):
            acc = M[r][n]
            for c in range(r + 1, n):
                acc -= M[r][c] * x[c]
            x[r] = acc / M[r][r]
        return x


def _inf_norm(v):
    return max(fabs(e) for e in v)


def newton_solve(F, x0, tol=None, max_iter: int = 80,
                 ctx: PrecisionCtx = DEFAULT_CTX, fd_step=None):
    """Damped Newton with central finite-difference Jacobian."""
    with ctx.workprec():
        x = [mpf(v) if not isinstance(v, (mpf, mpc)) else v for v in x0]
        if tol is None:
            tol = ctx.half_eps
        if fd_step is None:
            fd_step = ctx.third_eps
        n = len(x)
        fx = F(x)
        res = _inf_norm(fx)
        for _ in range(max_iter):
            if res <= tol:
                return x
            J = [[mpf(0)] * n for _ in range(n)]
            for j in range(n):
                h = fd_step * max(mpf(1), fabs(x[j]))
                xp = list(x)
                xm = list(x)
                xp[j] += h
                xm[j] -= h
                fp, fm = F(xp), F(xm)
                for i in range(n):
                    J[i][j] = (fp[i] - fm[i]) / (2 * h)
            step = solve_linear(J, fx, ctx)
            lam = mpf(1)
            for _ in range(30):
                trial = [xi - lam * si for xi, si in zip(x, step)]
                ftrial = F(trial)
                rtrial = _inf_norm(ftrial)
                if rtrial < res:
                    x, fx, res = trial, ftrial, rtrial
                    break
                lam /= 2
            else:
                raise NonConvergence("newton damping exhausted without residual decrease")
        if res <= tol:
            return x
        raise NonConvergence(f"newton residual {res} above tolerance {tol}")


# Dormand-Prince 5(4) coefficients.
_DP_A = [
    [],
    ["1/5"],
    ["3/40", "9/40"],
    ["44/45", "-56/15", "32/9"],
    ["19372/6561", "-25360/2187", "64448/6561", "-212/729"],
    ["9017/3168", "-355/33", "46732/5247", "49/176", "-5103/18656"],
    ["35/384", "0", "500/1113", "125/192", "-2187/6784", "11/84"],
]
_DP_B5 = ["35/384", "0", "500/1113", "125/192", "-2187/6784", "11/84", "0"]
_DP_B4 = ["5179/57600", "0", "7571/16695", "393/640", "-92097/339200", "187/2100", "1/40"]
_DP_C = ["0", "1/5", "3/10", "4/5", "8/9", "1", "1"]


class SampledPath:
    """Accepted ODE steps with cubic Hermite dense output."""

    def __init__(self, cs, ys, dys):
        self.cs = cs
        self.ys = ys
        self.dys = dys

    def __call__(self, c):
        cs = self.cs
        lo, hi = 0, len(cs) - 1
        cmin, cmax = min(cs[0], cs[-1]), max(cs[0], cs[-1])
        # Queries a few ulps past an endpoint (re-derived endpoint values)
        # clamp to the boundary.
        slack = (cmax - cmin) * mpf(2) ** (-mp.prec + 8)
        if not (cmin - slack <= c <= cmax + slack):
            raise ValueError("dense output query outside integration range")
        c = min(max(c, cmin), cmax)
        asc = cs[-1] >= cs[0]
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if (cs[mid] <= c) == asc:
                lo = mid
            else:
                hi = mid
        h = cs[hi] - cs[lo]
        if h == 0:
            return list(self.ys[lo])
        t = (c - cs[lo]) / h
        y0, y1 = self.ys[lo], self.ys[hi]
        d0, d1 = self.dys[lo], self.dys[hi]
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        return [h00 * a + h10 * h * da + h01 * b + h11 * h * db
                for a, da, b, db in zip(y0, d0, y1, d1)]


def ode_solve(field, c0, y0, c1, tol, ctx: PrecisionCtx = DEFAULT_CTX,
              max_steps: int = 200000) -> SampledPath:
    """Adaptive Dormand-Prince 5(4) from c0 to c1 with local error <= tol."""
    with ctx.workprec():
        A = [[mpf(mp.mpmathify(a)) for a in row] for row in _DP_A]
        B5 = [mpf(mp.mpmathify(a)) for a in _DP_B5]
        B4 = [mpf(mp.mpmathify(a)) for a in _DP_B4]
        C = [mpf(mp.mpmathify(a)) for a in _DP_C]
        tol = mpf(tol)
        c = mpf(c0)
        cend = mpf(c1)
        y = [mpf(v) for v in y0]
        direction = 1 if cend >= c else -1
        h = (cend - c) / 64
        if h == 0:
            raise ValueError("empty integration range")
        hfloor = mpf(2) ** (-ctx.bits // 2) * max(fabs(c), fabs(cend), mpf(1))
        cs, ys, dys = [c], [list(y)], [field(c, y)]
        for _ in range(max_steps):
            if direction * (c - cend) >= 0:
                return SampledPath(cs, ys, dys)
            last = direction * (c + h - cend) > 0
            if last:
                h = cend - c
            ks = [dys[-1]]
            for i in range(1, 7):
                yi = [y[j] + h * sum(A[i][m] * ks[m][j] for m in range(i))
                      for j in range(len(y))]
                ks.append(field(c + h * C[i], yi))
            y5 = [y[j] + h * sum(B5[m] * ks[m][j] for m in range(7)) for j in range(len(y))]
            err = max(fabs(h * sum((B5[m] - B4[m]) * ks[m][j] for m in range(7)))
                      / max(mpf(1), fabs(y5[j])) for j in range(len(y)))
            if err <= tol:
                c = cend if last else c + h
                y = y5
                cs.append(c)
                ys.append(list(y))
                dys.append(ks[6])  # FSAL: k7 = f(c+h, y5)
            # step size update
            if err == 0:
                fac = mpf(4)
            else:
                fac = mpf("0.9") * (tol / err) ** (mpf(1) / 5)
                fac = min(mpf(4), max(mpf("0.1"), fac))
            h = h * fac
            if fabs(h) < hfloor:
                raise StepUnderflow("ode step underflow")
        raise NonConvergence("ode step budget exhausted")


def poly_roots(p: Poly, max_iter: int = 400):
    """All roots with multiplicity via Aberth simultaneous iteration."""
    ctx = p.precision
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    with ctx.workprec():
        pm = p.monic()
        deg = pm.degree
        dp = pm.derivative()
        # Seeds: double-precision companion roots, perturbed off symmetry.
        try:
            cs = np.array([complex(c) for c in pm.coeffs][::-1], dtype=complex)
            seeds = np.roots(cs)
            if len(seeds) != deg or not np.all(np.isfinite(seeds)):
                raise ValueError
            roots = [mpc(z) + mpc(0, ctx.third_eps) for z in seeds]
        except (ValueError, OverflowError):
            rad = 1 + pm.norm()
            roots = [rad * mp.expjpi(2 * mpf(k) / deg + mpf(1) / (2 * deg)) for k in range(deg)]
        tol = ctx.half_eps * p.norm()
        for _ in range(max_iter):
            done = True
            new = []
            for i, r in enumerate(roots):
                pr = pm(r)
                if fabs(pr) > tol:
                    done = False
                dpr = dp(r)
                if dpr == 0:
                    new.append(r + ctx.third_eps)
                    done = False
                    continue
                ratio = pr / dpr
                s = mpc(0)
                for j, rj in enumerate(roots):
                    if j != i and r != rj:
                        s += 1 / (r - rj)
                denom = 1 - ratio * s
                step = ratio / denom if denom != 0 else ratio
                new.append(r - step)
            roots = new
            if done:
                break
        else:
            raise NonConvergence("aberth iteration did not converge")
        return sorted(roots, key=lambda z: (mp.re(z), mp.im(z)))
