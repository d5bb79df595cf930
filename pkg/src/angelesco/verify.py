"""Predicted strong asymptotics vs. the moment oracle.

Builds the predicted quantities (P-factor products, type I forms,
recurrence limits, h-constants) from curve parameters and Szego data at
the exact rational ratio c(n) = n1/|n|, evaluates the oracle at the same
indices, and emits relative-error tables across index schedules.  The
alternating schedule, whose ratio c(n) has no limit, is the uniformity
stressor.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from mpmath import fabs, im, mp, mpc, mpf, re

from .curve import (CurveParams, Geometry, sheet_values, solve_params, w_map)
from .errors import TooCloseToSupport
from .kernel import poly_roots
from .mop import MopSolver
from .precision import DEFAULT_CTX, PrecisionCtx
from .surface import E1, E2, MultiIndex, phi_n_value, tau_n
from .szego import SzegoCache, cache_for

DEFAULT_PROBES = ("2", "2+1j", "-3+2j", "midgap+0.5j")


@dataclass(frozen=True)
class IndexSchedule:
    kind: str
    k_min: int
    k_max: int

    @property
    def indices(self):
        out = []
        for k in range(self.k_min, self.k_max + 1):
            if self.kind == "diagonal":
                out.append(MultiIndex(k, k))
            elif self.kind.startswith("ray:"):
                _, p, q = self.kind.split(":")
                out.append(MultiIndex(k * int(p), k * int(q)))
            elif self.kind.startswith("alternating:"):
                _, r1, r2 = self.kind.split(":")
                out.append(MultiIndex(k, k))
                out.append(MultiIndex(k * int(r1), k * int(r2)))
            elif self.kind == "drifting":
                # ratio drifts slowly: n = (k, k + floor(sqrt(k)))
                out.append(MultiIndex(k, k + math.isqrt(k)))
            else:
                raise ValueError(f"unknown schedule {self.kind!r}")
        return [n for n in out if min(n.n1, n.n2) >= 1]


@dataclass
class ErrorRow:
    n: MultiIndex
    c: object
    eps: object
    observable: str
    probe: str
    predicted: object
    observed: object
    rel_error: object
    note: str = ""


class Predictor:
    """Curve + Szego data at one ratio c, with the prediction formulas."""

    def __init__(self, geometry: Geometry, weights, c,
                 ctx: PrecisionCtx = DEFAULT_CTX):
        self.geometry = geometry
        self.weights = tuple(weights)
        self.ctx = ctx
        self.params = solve_params(geometry, c, ctx)
        self.cache = cache_for(self.params, self.weights, ctx)

    def _guard(self, z, i=None):
        with self.ctx.workprec():
            z = mpc(z)
            for j in ((i,) if i else (1, 2)):
                a, b = self.params.support(j)
                if im(z) == 0 and a < re(z) < b:
                    continue    # boundary evaluation goes through side flags
                d = abs(z - mpc(min(max(re(z), a), b)))
                if d != 0 and d < mpf("1e-6") * (b - a):
                    raise TooCloseToSupport("probe hugs the support")

    def gamma(self, n: MultiIndex, i: int):
        p = self.params
        t = tau_n(p, n)
        if i == 1:
            return t * p.A1 ** n.n1 * (p.B1 - p.B2) ** n.n2 * self.cache.at_infinity()[1]
        return t * p.A2 ** n.n2 * (p.B2 - p.B1) ** n.n1 * self.cache.at_infinity()[2]

    def P_factor(self, n: MultiIndex, i: int, z, side: str = "auto"):
        """Predicted monic factor of P_n tied to interval i."""
        with self.ctx.workprec():
            self._guard(z)
            S = self.cache.value(i, z, side)
            phi, _ = phi_n_value(self.params, n, i, z, side)
            return self.gamma(n, i) / (S * phi)

    def P_full(self, n: MultiIndex, z, side: str = "auto"):
        """Predicted P_n: (S Phi)^(0) / (tau_n S^(0)(inf))."""
        with self.ctx.workprec():
            self._guard(z)
            S = self.cache.value(0, z, side)
            phi, t = phi_n_value(self.params, n, 0, z, side)
            return S * phi / (t * self.cache.at_infinity()[0])

    def A_form(self, n: MultiIndex, i: int, z, side: str = "auto"):
        """Predicted type I polynomial A_n^{(i)}."""
        p = self.params
        with self.ctx.workprec():
            self._guard(z)
            chis = sheet_values(p, z, side)
            Pi = 1 / p.dz_of_chi(chis[i])
            S = self.cache.value(i, z, side)
            phi, t = phi_n_value(p, n, i, z, side)
            w = w_map(p.support(i), z, side if side in "+-" else "off", self.ctx)
            return (t * self.cache.at_infinity()[0] * w * (-Pi) / (S * phi))

    def h_parent(self, n: MultiIndex, i: int):
        """Predicted h_{n-e_i,i} (reciprocal leading coefficient of A^{(i)})."""
        p = self.params
        s0, s1, s2 = self.cache.at_infinity()
        with self.ctx.workprec():
            if i == 1:
                return p.A1 ** (n.n1 - 1) * (p.B1 - p.B2) ** n.n2 * s1 / s0
            return p.A2 ** (n.n2 - 1) * (p.B2 - p.B1) ** n.n1 * s2 / s0


_PREDICTORS: dict = {}


def predictor_for(geometry, weights, c, ctx: PrecisionCtx = DEFAULT_CTX) -> Predictor:
    key = (geometry, tuple(weights), str(mpf(c)), ctx.bits)
    if key not in _PREDICTORS:
        _PREDICTORS[key] = Predictor(geometry, weights, c, ctx)
    return _PREDICTORS[key]


def predicted_recurrence(geometry, n: MultiIndex, i: int,
                         ctx: PrecisionCtx = DEFAULT_CTX):
    """(A_{c(n),i}, B_{c(n+e_i),i})."""
    with ctx.workprec():
        p_here = solve_params(geometry, n.ratio(ctx), ctx)
        p_next = solve_params(geometry, (n + (E1 if i == 1 else E2)).ratio(ctx), ctx)
        A = p_here.A1 if i == 1 else p_here.A2
        B = p_next.B1 if i == 1 else p_next.B2
        return A, B


def split_zeros(roots, geometry: Geometry, ctx: PrecisionCtx):
    """Partition P_n zeros by nearest interval; None on a tie."""
    g1, g2 = [], []
    with ctx.workprec():
        for r in roots:
            d1 = _interval_dist(r, geometry.alpha1, geometry.beta1)
            d2 = _interval_dist(r, geometry.alpha2, geometry.beta2)
            if fabs(d1 - d2) <= ctx.third_eps:
                return None
            (g1 if d1 < d2 else g2).append(r)
    return g1, g2


def _interval_dist(z, a, b):
    x = re(z)
    dx = mpf(0) if a <= x <= b else min(fabs(x - a), fabs(x - b))
    return abs(mpc(dx, im(z)))


def _resolve_probe(probe, geometry, ctx):
    with ctx.workprec():
        if isinstance(probe, str) and probe.startswith("midgap"):
            mid = (geometry.beta1 + geometry.alpha2) / 2
            rest = probe[len("midgap"):]
            return mid + (mpc(complex(rest)) if rest else 0)
        return mpc(complex(probe)) if isinstance(probe, str) else mpc(probe)


def run_comparison(geometry: Geometry, weights, schedule: IndexSchedule,
                   observables=("P", "A1", "a", "b", "h"),
                   probes=DEFAULT_PROBES,
                   ctx: PrecisionCtx = DEFAULT_CTX):
    """ErrorRow table over the schedule; skips non-normal indices."""
    oracle = MopSolver(weights, ctx)
    rows = []
    for n in schedule.indices:
        with ctx.workprec():
            c = n.ratio(ctx)
            eps = n.eps
            res = oracle.solve(n)
            if not res.normal:
                rows.append(ErrorRow(n, c, eps, "skipped", "", None, None,
                                     None, "non-normal index"))
                continue
            pred = predictor_for(geometry, weights, c, ctx)
            for obs in observables:
                rows.extend(_rows_for(obs, n, c, eps, pred, oracle, res,
                                      geometry, probes, ctx))
    return rows


def _rel(pred, obs):
    return abs(obs / pred - 1) if pred != 0 else mp.inf


def _rows_for(obs, n, c, eps, pred: Predictor, oracle: MopSolver, res,
              geometry, probes, ctx):
    rows = []
    if obs == "P":
        for probe in probes:
            z = _resolve_probe(probe, geometry, ctx)
            p_val = pred.P_full(n, z)
            o_val = res.P(z)
            rows.append(ErrorRow(n, c, eps, "P", str(probe), p_val, o_val,
                                 _rel(p_val, o_val)))
    elif obs == "P_boundary":
        split = split_zeros(poly_roots(res.P), geometry, ctx)
        if split is None:
            rows.append(ErrorRow(n, c, eps, "P_boundary", "", None, None,
                                 None, "zero equidistant from both intervals"))
            return rows
        for i in (1, 2):
            a, b = pred.params.support(i)
            x = (a + b) / 2
            obs_val = mpf(1)
            for r in split[i - 1]:
                obs_val *= (x - r)
            two_sided = (pred.P_factor(n, i, x, "+")
                         + pred.P_factor(n, i, x, "-"))
            denom = (abs(pred.P_factor(n, i, x, "+"))
                     + abs(pred.P_factor(n, i, x, "-")))
            rows.append(ErrorRow(n, c, eps, "P_boundary", f"mid{i}",
                                 two_sided, obs_val,
                                 abs(obs_val - two_sided) / denom))
    elif obs in ("A1", "A2"):
        i = 1 if obs == "A1" else 2
        poly = res.A1_poly if i == 1 else res.A2_poly
        for probe in probes:
            z = _resolve_probe(probe, geometry, ctx)
            p_val = pred.A_form(n, i, z)
            o_val = poly(z)
            rows.append(ErrorRow(n, c, eps, obs, str(probe), p_val, o_val,
                                 _rel(p_val, o_val)))
    elif obs == "a":
        for i in (1, 2):
            A_pred, _ = predicted_recurrence(geometry, n, i, ctx)
            o_val = oracle.a(n, i)
            rows.append(ErrorRow(n, c, eps, f"a{i}", "", A_pred, o_val,
                                 _rel(A_pred, o_val)))
    elif obs == "b":
        for i in (1, 2):
            _, B_pred = predicted_recurrence(geometry, n, i, ctx)
            o_val = oracle.b(n, i)
            rows.append(ErrorRow(n, c, eps, f"b{i}", "", B_pred, o_val,
                                 _rel(B_pred, o_val)))
    elif obs == "h":
        p_val = pred.h_parent(n, 1)
        o_val = oracle.solve(n - E1).h[0]
        rows.append(ErrorRow(n, c, eps, "h", "", p_val, o_val,
                             _rel(p_val, o_val)))
    else:
        raise ValueError(f"unknown observable {obs!r}")
    return rows


def fit_uniform_constant(rows, observable="a1", exponent=None):
    """Smallest C with rel_error <= C * eps^exponent over the rows."""
    if exponent is None:
        exponent = mpf(1) / 3
    C = mpf(0)
    for row in rows:
        if row.observable == observable and row.rel_error is not None:
            C = max(C, row.rel_error / mpf(row.eps) ** exponent)
    return C


def write_rows_csv(path, rows, digits: int = 17):
    header = ["n1", "n2", "c", "eps", "observable", "probe",
              "predicted_re", "predicted_im", "observed_re", "observed_im",
              "rel_error"]

    def s(v):
        return "" if v is None else mp.nstr(v, digits)

    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for r in rows:
            pv, ov = (mpc(r.predicted) if r.predicted is not None else None,
                      mpc(r.observed) if r.observed is not None else None)
            wr.writerow([r.n.n1, r.n.n2, s(r.c), s(r.eps), r.observable,
                         r.probe,
                         s(re(pv)) if pv is not None else "",
                         s(im(pv)) if pv is not None else "",
                         s(re(ov)) if ov is not None else "",
                         s(im(ov)) if ov is not None else "",
                         s(r.rel_error)])
