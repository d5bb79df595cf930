"""Classical and surface Szego functions.

The surface Szego function is evaluated directly in the global chi
coordinate: the cycles over the cuts become the two Jordan curves
A1/|chi-B1|^2 + A2/|chi-B2|^2 = 1, parametrized exactly by the base point
x through the conjugate pair of cubic roots.  All integrals reduce to
Cauchy-type averages

    C_i(u) = (1/2 pi i) oint_i f_i(s) / (s - u) ds,

with f_i(x) = log rho_i(x) + log|w_{c,i}(x)| + i pi/2, and trace values on
the cuts handled by Plemelj regularization (exterior limit = regularized
integral, interior limit adds f_i(x0)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import (arg, conj, cos, exp, fabs, im, log, mp, mpc, mpf, pi,
                    re, sin, sqrt, workprec)

from .curve import CurveParams, sheet_values, w_map
from .errors import NonConvergence, TooCloseToBranchPoint, WindingDetected
from .precision import DEFAULT_CTX, PrecisionCtx

# Bits used inside contour quadrature.  Target accuracies downstream are
# 1e-8..1e-12; tanh-sinh cost scales with precision, so the full working
# precision would be wasted here.
QUAD_BITS = 96

KINDS = ("positive-poly", "exp-poly", "complex-poly")


@dataclass(frozen=True)
class WeightSpec:
    """Weight rho(x) = -2 pi i v(x) on an interval.

    kinds: positive-poly and exp-poly have v(x) = p(x) resp. exp(p(x)) > 0,
    giving the positive measure v dx; complex-poly allows complex p(x)
    non-vanishing on the interval.
    """

    kind: str
    coeffs: tuple
    interval: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        def keep(x):
            # don't re-round scalars that already carry full precision
            if isinstance(x, (mpf, mpc)):
                return x
            v = mpc(x)
            return v if im(v) != 0 else re(v)

        object.__setattr__(self, "coeffs", tuple(keep(c) for c in self.coeffs))
        object.__setattr__(self, "interval", tuple(keep(e) for e in self.interval))

    def _poly(self, x):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def v(self, x):
        if self.kind == "exp-poly":
            return exp(self._poly(x))
        return self._poly(x)

    def rho(self, x):
        return -2 * pi * mpc(0, 1) * self.v(x)


def lebesgue(interval) -> WeightSpec:
    return WeightSpec("positive-poly", (1,), interval)


class LogWeight:
    """Continuous determination of log rho along the interval."""

    def __init__(self, weight: WeightSpec, samples: int = 256,
                 ctx: PrecisionCtx = DEFAULT_CTX):
        self.weight = weight
        self.ctx = ctx
        a, b = weight.interval
        with ctx.workprec():
            self._const = log(2 * pi) - mpc(0, 1) * pi / 2
            if weight.kind == "complex-poly":
                self._build_arg_table(a, b, samples)

    def _build_arg_table(self, a, b, samples):
        w = self.weight
        xs = [a + (b - a) * k / samples for k in range(samples + 1)]
        args = []
        prev = None
        for x in xs:
            v = w.v(x)
            if abs(v) <= self.ctx.third_eps:
                raise WindingDetected("weight vanishes on the interval")
            t = arg(v)
            if prev is not None:
                while t - prev > pi:
                    t -= 2 * pi
                while prev - t > pi:
                    t += 2 * pi
                if fabs(t - prev) > pi / 2:
                    raise WindingDetected(
                        "argument jump exceeds pi/2 between samples")
            args.append(t)
            prev = t
        self._xs, self._args = xs, args

    def __call__(self, x):
        """log rho(x), continuous in x along the interval."""
        w = self.weight
        if w.kind == "positive-poly":
            v = w.v(x)
            if not v > 0:
                raise WindingDetected("positive-poly weight not positive")
            return log(v) + self._const
        if w.kind == "exp-poly":
            return w._poly(x) + self._const
        v = w.v(x)
        # nearest sample anchors the branch
        k = min(range(len(self._xs)), key=lambda j: fabs(self._xs[j] - x))
        t = arg(v)
        while t - self._args[k] > pi:
            t -= 2 * pi
        while self._args[k] - t > pi:
            t += 2 * pi
        return log(abs(v)) + self._const + mpc(0, 1) * t


def log_weight_determination(weight: WeightSpec, samples: int = 256,
                             ctx: PrecisionCtx = DEFAULT_CTX) -> LogWeight:
    return LogWeight(weight, samples, ctx)


def classical_szego(weight: WeightSpec, z, ctx: PrecisionCtx = DEFAULT_CTX,
                    logw: LogWeight = None):
    """S(z) = exp{ w(z)/(2 pi i) int log(rho w_+)(x) / ((z-x) w_+(x)) dx }."""
    a, b = weight.interval
    if logw is None:
        logw = LogWeight(weight, ctx=ctx)
    with ctx.workprec():
        z = mpc(z)
        m, r = (a + b) / 2, (b - a) / 2
        wz = w_map((a, b), z, ctx=ctx)
        with workprec(QUAD_BITS):
            def g(theta):
                x = m + r * cos(theta)
                lg = logw(x) + log(r * sin(theta)) + mpc(0, 1) * pi / 2
                return lg / (z - x)
            integral = mp.quad(g, [mpf(0), pi / 2, pi], maxdegree=8)
        return exp(-wz / (2 * pi) * integral)


class SzegoCache:
    """Surface Szego evaluator for fixed curve parameters and weights."""

    def __init__(self, params: CurveParams, weights, ctx: PrecisionCtx = None,
                 samples: int = 256):
        self.params = params
        self.ctx = ctx or params.ctx
        self.weights = tuple(weights)
        if len(self.weights) != 2:
            raise ValueError("need a weight per interval")
        self.logw = tuple(LogWeight(w, samples, self.ctx) for w in self.weights)
        self._nodes = ({}, {})   # per contour: x -> (s_plus, ds_plus, f)
        self._C_memo = {}
        self._inf = None

    # node data ---------------------------------------------------------

    def _node(self, i, x):
        memo = self._nodes[i - 1]
        got = memo.get(x)
        if got is not None:
            return got
        from .curve import _cubic_chi_roots
        p = self.params
        a, b = p.support(i)
        # Quadrature nodes crowd the endpoints; work at full precision so
        # the conjugate pair stays resolved, and take the upper root
        # directly instead of going through sheet classification.
        with p.ctx.workprec():
            roots = _cubic_chi_roots(p, mpf(x))
            s_plus = max(roots, key=lambda r: im(r))
            ds_plus = 1 / p.dz_of_chi(s_plus)
            f = (self.logw[i - 1](x) + log(sqrt((x - a) * (b - x)))
                 + mpc(0, 1) * pi / 2)
        memo[x] = (s_plus, ds_plus, f)
        return memo[x]

    # Cauchy averages ---------------------------------------------------

    def _C(self, i, u, mode="off", x0=None):
        """(1/2 pi i) oint f_i(s)/(s-u) ds over contour i, CCW.

        mode 'ext'/'int': u = s_pm(x0) is ON the contour and the value is
        the limit from outside resp. inside the Jordan curve.
        """
        key = (i, str(u), mode, str(x0))
        got = self._C_memo.get(key)
        if got is not None:
            return got
        p = self.params
        a, b = p.support(i)
        m, r = (a + b) / 2, (b - a) / 2
        with workprec(QUAD_BITS):
            f0 = self._node(i, mpf(x0))[2] if mode != "off" else None

            def g(theta):
                with self.params.ctx.workprec():
                    x = m + r * cos(theta)
                    if not a < x < b:
                        # node rounded onto an endpoint; the integrand is
                        # log-divergent there and the dropped mass is far
                        # below quadrature accuracy
                        return mpc(0)
                    s, ds, f = self._node(i, x)
                    fx = f if mode == "off" else f - f0
                    # CCW: lower arc (conjugate) with +dx, upper arc with -dx
                    val = fx * (conj(ds) / (conj(s) - u) - ds / (s - u))
                    return val * r * sin(theta)

            if mode == "off":
                pieces = [mpf(0), pi / 2, pi]
            else:
                t0 = mp.acos((mpf(x0) - m) / r)
                pieces = sorted({mpf(0), t0, pi})
            integral = mp.quad(g, pieces, maxdegree=8)
            out = integral / (2 * pi * mpc(0, 1))
            if mode == "int":
                out = out + f0
        self._C_memo[key] = out
        return out

    # public ------------------------------------------------------------

    def _guard_branch_points(self, z):
        p = self.params
        for i in (1, 2):
            a, b = p.support(i)
            if min(abs(mpc(z) - a), abs(mpc(z) - b)) < mpf("1e-6") * (b - a):
                raise TooCloseToBranchPoint(
                    "Szego evaluation inside the quarter-root blowup region")

    def value(self, sheet: int, z, side: str = "auto"):
        p = self.params
        with self.ctx.workprec():
            if mp.isinf(z):
                return self.at_infinity()[sheet]
            self._guard_branch_points(z)
            z = mpc(z) if side == "auto" else mpf(re(mpc(z)))
            chis = sheet_values(p, z, side)
            cut = self._cut_of(z, side)
            expo = mpf(0)
            for i in (1, 2):
                for coeff, sh in ((2, sheet),) + tuple(
                        (-1, s) for s in range(3) if s != sheet):
                    mode, x0 = "off", None
                    if cut is not None and i == cut and sh in (0, cut):
                        mode = "ext" if sh == 0 else "int"
                        x0 = z
                    expo += coeff * self._C(i, chis[sh], mode, x0)
            return exp(expo / 3)

    def _cut_of(self, z, side):
        if side == "auto":
            return None
        from .curve import _on_cut
        return _on_cut(self.params, z)

    def at_infinity(self):
        """(S0(inf), S1(inf), S2(inf))."""
        if self._inf is not None:
            return self._inf
        p = self.params
        with self.ctx.workprec():
            c1 = [self._C(i, p.B1) for i in (1, 2)]
            c2 = [self._C(i, p.B2) for i in (1, 2)]
            s0 = exp(-(sum(c1) + sum(c2)) / 3)
            s1 = exp((2 * sum(c1) - sum(c2)) / 3)
            s2 = exp((2 * sum(c2) - sum(c1)) / 3)
            self._inf = (s0, s1, s2)
        return self._inf


def surface_szego(cache: SzegoCache, sheet: int, z, side: str = "auto"):
    return cache.value(sheet, z, side)


def szego_infinity(cache: SzegoCache):
    """(S0(inf), S1(inf), S2(inf), s1, s2) with s_i = S0(inf)/Si(inf)."""
    s0, s1, s2 = cache.at_infinity()
    return (s0, s1, s2, s0 / s1, s0 / s2)


_CACHES: dict = {}


def cache_for(params: CurveParams, weights, ctx: PrecisionCtx = None) -> SzegoCache:
    key = (params.geometry, str(params.c), tuple(weights),
           (ctx or params.ctx).bits)
    if key not in _CACHES:
        _CACHES[key] = SzegoCache(params, weights, ctx)
    return _CACHES[key]
