"""Batch front door.

Reads geometry/weight config files, dispatches to the numeric modules, and
emits diff-able CSV artifacts.  Every output ends with a provenance footer
(precision bits, node counts, continuation grid) so tables are auditable
and byte-reproducible.

Exit codes: 0 ok, 1 config error, 2 numeric failure, 3 acceptance failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import sys

from mpmath import im, mp, mpf, re

from . import curve as _curve
from . import flow as _flow
from . import surface as _surface
from . import szego as _szego
from . import verify as _verify
from .curve import Geometry
from .errors import AngelescoError
from .mop import MopSolver
from .precision import PrecisionCtx
from .surface import MultiIndex, equilibrium_density, equilibrium_mass
from .szego import KINDS, QUAD_BITS, WeightSpec, lebesgue
from .verify import IndexSchedule


class ConfigError(Exception):
    pass


def _parse_number(s: str):
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return mpf(num.strip()) / mpf(den.strip())
    return mpf(s)


def load_geometry(path: str) -> Geometry:
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ConfigError(f"cannot read geometry file {path}")
    sec = cp["geometry"] if cp.has_section("geometry") else cp["DEFAULT"]
    try:
        vals = [_parse_number(sec[k])
                for k in ("alpha1", "beta1", "alpha2", "beta2")]
    except KeyError as exc:
        raise ConfigError(f"geometry file missing field {exc}") from exc
    return Geometry(*vals)


def load_weights(path: str | None, geometry: Geometry):
    if path is None:
        return (lebesgue(geometry.interval(1)), lebesgue(geometry.interval(2)))
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ConfigError(f"cannot read weights file {path}")
    out = []
    for i in (1, 2):
        name = f"weight{i}"
        if not cp.has_section(name):
            raise ConfigError(f"weights file missing section [{name}]")
        sec = cp[name]
        kind = sec.get("kind", "positive-poly").strip()
        if kind not in KINDS:
            raise ConfigError(f"unknown weight kind {kind!r}")
        coeffs = tuple(c.strip() for c in sec.get("coefficients", "1").split(","))
        if sec.get("interval"):
            iv = tuple(str(_parse_number(t))
                       for t in sec["interval"].split(","))
        else:
            iv = tuple(str(x) for x in geometry.interval(i))
        out.append(WeightSpec(kind, coeffs, iv))
    return tuple(out)


def _resolve_bits(args) -> int:
    if args.bits is not None:
        bits = args.bits
    else:
        bits = int(os.environ.get("ANGELESCO_BITS", "256"))
    if bits < 64:
        raise ConfigError("precision must be at least 64 bits")
    return bits


class _Emitter:
    """Accumulates CSV rows + footer, then writes atomically (temp + rename)."""

    def __init__(self, out: str | None):
        self.out = out
        self.buf = io.StringIO()
        self.writer = csv.writer(self.buf)
        self.footer = []

    def row(self, cells):
        self.writer.writerow(cells)

    def note(self, line: str):
        self.footer.append(f"# {line}")

    def flush(self):
        text = self.buf.getvalue() + "".join(l + "\n" for l in self.footer)
        if self.out is None:
            sys.stdout.write(text)
        else:
            tmp = self.out + ".tmp"
            with open(tmp, "w") as fh:
                fh.write(text)
            os.replace(tmp, self.out)


def _nstr(x, digits=30):
    return mp.nstr(x, digits)


def _provenance(em: _Emitter, ctx: PrecisionCtx, extra=()):
    em.note(f"bits = {ctx.bits} (guard {ctx.guard_bits})")
    em.note(f"szego quadrature bits = {QUAD_BITS}, tanh-sinh maxdegree = 8")
    em.note("continuation step = 1e-2 (halving floor 2^-20), edge seed c0 = 1e-8")
    for line in extra:
        em.note(line)


def cmd_curve(args, geometry, weights, ctx):
    em = _Emitter(args.out)
    em.row(["c", "regime", "A1", "A2", "B1", "B2", "beta_c1", "alpha_c2"])
    with ctx.workprec():
        if args.sweep:
            lo, hi, step = (_parse_number(t) for t in args.sweep.split(":"))
            cs, c = [], lo
            while c <= hi + step / 2:
                cs.append(c)
                c += step
        elif args.c is not None:
            cs = [_parse_number(args.c)]
        else:
            raise ConfigError("curve needs --c or --sweep")
    for c in cs:
        try:
            p = _curve.solve_params(geometry, c, ctx)
        except AngelescoError as exc:
            print(f"curve solve failed at c = {_nstr(c)}: {exc}", file=sys.stderr)
            return 2
        em.row([_nstr(c), p.regime.value] + [_nstr(v, 40) for v in
                (p.A1, p.A2, p.B1, p.B2, p.beta_c1, p.alpha_c2)])
    cs1, cs2 = _curve.find_thresholds(geometry, ctx)
    em.note(f"c_star = {_nstr(cs1, 40)}")
    em.note(f"c_star_star = {_nstr(cs2, 40)}")
    _provenance(em, ctx)
    em.flush()
    return 0


def cmd_thresholds(args, geometry, weights, ctx):
    em = _Emitter(args.out)
    em.row(["c_star", "c_star_star"])
    cs1, cs2 = _curve.find_thresholds(geometry, ctx)
    em.row([_nstr(cs1, 40), _nstr(cs2, 40)])
    _provenance(em, ctx)
    em.flush()
    return 0


def cmd_ode(args, geometry, weights, ctx):
    with ctx.workprec():
        lo, hi = (_parse_number(t) for t in args.range.split(":"))
        tol = mpf(args.tol)
    em = _Emitter(args.out)
    table = _flow.integrate_flow(geometry, lo, hi, tol=tol, ctx=ctx)
    em.row(["c", "R", "B", "A1", "A2", "B1", "B2"])
    with ctx.workprec():
        npts = 50
        worst = mpf(0)
        for j in range(npts + 1):
            c = lo + (hi - lo) * mpf(j) / npts
            st = table.at(c)
            em.row([_nstr(c)] + [_nstr(v, 40) for v in
                    (st.R, st.B, st.A1, st.A2, st.B1, st.B2)])
            if j % 5 == 0:
                p = _curve.solve_params(geometry, c, ctx)
                for got, want in ((st.A1, p.A1), (st.A2, p.A2),
                                  (st.B1, p.B1), (st.B2, p.B2)):
                    worst = max(worst, abs(got / want - 1))
    em.note(f"max relative deviation vs algebraic solve = {_nstr(worst, 10)}")
    em.note(f"ode tol = {_nstr(tol, 5)}")
    _provenance(em, ctx)
    em.flush()
    return 0


def cmd_measure(args, geometry, weights, ctx):
    if args.c is None:
        raise ConfigError("measure needs --c")
    with ctx.workprec():
        p = _curve.solve_params(geometry, _parse_number(args.c), ctx)
    em = _Emitter(args.out)
    em.row(["interval", "x", "density"])
    with ctx.workprec():
        for i in (1, 2):
            a, b = p.support(i)
            for j in range(1, 40):
                x = a + (b - a) * mpf(j) / 40
                em.row([i, _nstr(x), _nstr(equilibrium_density(p, i, x), 40)])
            em.note(f"mass_{i} = {_nstr(equilibrium_mass(p, i), 40)}")
    _provenance(em, ctx)
    em.flush()
    return 0


def cmd_szego(args, geometry, weights, ctx):
    if args.c is None:
        raise ConfigError("szego needs --c")
    with ctx.workprec():
        p = _curve.solve_params(geometry, _parse_number(args.c), ctx)
    cache = _szego.cache_for(p, weights, ctx)
    em = _Emitter(args.out)
    em.row(["probe", "sheet", "re", "im"])
    probes = (args.probes or "2,2+1j,-3+2j").split(",")
    with ctx.workprec():
        for probe in probes:
            z = _verify._resolve_probe(probe.strip(), geometry, ctx)
            for sheet in (0, 1, 2):
                v = cache.value(sheet, z)
                em.row([probe.strip(), sheet, _nstr(re(v), 40), _nstr(im(v), 40)])
        s0, s1, s2 = cache.at_infinity()
        for name, v in (("S0_inf", s0), ("S1_inf", s1), ("S2_inf", s2)):
            em.note(f"{name} = {_nstr(re(v), 40)} + {_nstr(im(v), 40)}j")
    _provenance(em, ctx)
    em.flush()
    return 0


def cmd_mop(args, geometry, weights, ctx):
    if not args.n:
        raise ConfigError("mop needs --n N1,N2")
    n1, n2 = (int(t) for t in args.n.split(","))
    n = MultiIndex(n1, n2)
    solver = MopSolver(weights, ctx)
    res = solver.solve(n)
    em = _Emitter(args.out)
    em.row(["polynomial", "degree", "coefficient"])
    for name, poly in (("P", res.P), ("A1", res.A1_poly), ("A2", res.A2_poly)):
        for k, ck in enumerate(poly.coeffs):
            em.row([name, k, _nstr(ck, 40)])
    with ctx.workprec():
        em.note(f"normal = {res.normal}")
        em.note(f"h1 = {_nstr(res.h[0], 40)}, h2 = {_nstr(res.h[1], 40)}")
        if min(n1, n2) >= 1 or n1 + n2 >= 1:
            for i in (1, 2):
                if (n1 if i == 1 else n2) >= 1:
                    em.note(f"a{i} = {_nstr(solver.a(n, i), 40)}")
                em.note(f"b{i} = {_nstr(solver.b(n, i), 40)}")
    _provenance(em, ctx)
    em.flush()
    return 0


_THM_OBSERVABLES = {1: ("P", "P_boundary"), 2: ("A1", "h"), 3: ("a", "b")}


def cmd_verify(args, geometry, weights, ctx):
    if args.thm not in _THM_OBSERVABLES:
        raise ConfigError("--thm must be 1, 2 or 3")
    if args.kmax < 2:
        raise ConfigError("--kmax must be at least 2 "
                          "(eps_n needs min(n1,n2) >= 1 and a trend needs "
                          ">= 2 points)")
    sched = IndexSchedule(args.schedule, 2, args.kmax)
    probes = tuple(t.strip() for t in args.probes.split(",")) if args.probes \
        else _verify.DEFAULT_PROBES
    rows = _verify.run_comparison(geometry, weights, sched,
                                  observables=_THM_OBSERVABLES[args.thm],
                                  probes=probes, ctx=ctx)
    em = _Emitter(args.out)
    failed = _emit_rows(em, rows, ctx)
    if args.schedule.startswith("alternating"):
        with ctx.workprec():
            C = _verify.fit_uniform_constant(rows, "a1" if args.thm == 3 else "P")
            em.note(f"uniform constant C (rel_error <= C * eps^(1/3)) = "
                    f"{_nstr(C, 10)}")
    _provenance(em, ctx)
    em.flush()
    return 3 if failed else 0


def _emit_rows(em, rows, ctx):
    em.row(["n1", "n2", "c", "eps", "observable", "probe", "predicted_re",
            "predicted_im", "observed_re", "observed_im", "rel_error"])
    trend = {}
    with ctx.workprec():
        for r in rows:
            pv, ov = r.predicted, r.observed
            em.row([r.n.n1, r.n.n2, _nstr(r.c), _nstr(r.eps), r.observable,
                    r.probe,
                    _nstr(re(pv), 25) if pv is not None else "",
                    _nstr(im(pv), 25) if pv is not None else "",
                    _nstr(re(ov), 25) if ov is not None else "",
                    _nstr(im(ov), 25) if ov is not None else "",
                    _nstr(r.rel_error, 17) if r.rel_error is not None else ""])
            if r.rel_error is not None:
                trend.setdefault((r.observable, r.probe), []).append(
                    (min(r.n.n1, r.n.n2), r.rel_error))
        failed = False
        for key, samples in trend.items():
            samples.sort()
            ok = samples[-1][1] <= samples[0][1]
            em.note(f"trend {key[0]}@{key[1] or '-'}: "
                    f"{'pass' if ok else 'FAIL'} "
                    f"({_nstr(samples[0][1], 6)} -> {_nstr(samples[-1][1], 6)})")
            failed = failed or not ok
    return failed


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="angelesco",
        description="Spectral-curve data, equilibrium measures, Szego "
                    "functions, and strong-asymptotic verification for "
                    "Angelesco systems.")
    ap.add_argument("--geometry", required=True, help="geometry config file")
    ap.add_argument("--weights", help="weights config file (default Lebesgue)")
    ap.add_argument("--bits", type=int, help="precision bits (env ANGELESCO_BITS)")
    ap.add_argument("--out", help="output CSV path (default stdout)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="solve curve parameters at --c or --sweep")
    p.add_argument("--c")
    p.add_argument("--sweep", help="A:B:STEP")
    sub.add_parser("thresholds", help="emit c*, c**")
    p = sub.add_parser("ode", help="integrate the parameter flow over --range")
    p.add_argument("--range", required=True, help="A:B")
    p.add_argument("--tol", default="1e-10")
    p = sub.add_parser("measure", help="equilibrium densities and masses at --c")
    p.add_argument("--c", required=True)
    p = sub.add_parser("szego", help="Szego branches at probe points for --c")
    p.add_argument("--c", required=True)
    p.add_argument("--probes")
    p = sub.add_parser("mop", help="oracle polynomials at --n N1,N2")
    p.add_argument("--n", required=True)
    p = sub.add_parser("verify", help="predicted vs oracle error tables")
    p.add_argument("--thm", type=int, required=True)
    p.add_argument("--schedule", default="diagonal",
                   help="diagonal | ray:p:q | alternating:r1:r2 | drifting")
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--probes")

    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    handlers = {"curve": cmd_curve, "thresholds": cmd_thresholds,
                "ode": cmd_ode, "measure": cmd_measure, "szego": cmd_szego,
                "mop": cmd_mop, "verify": cmd_verify}
    try:
        ctx = PrecisionCtx(bits=_resolve_bits(args))
        with ctx.workprec():
            geometry = load_geometry(args.geometry)
            weights = load_weights(args.weights, geometry)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return handlers[args.command](args, geometry, weights, ctx)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except AngelescoError as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
