"""Acceptance gate: one test (and one printed pass/fail line) per criterion.

Reference setup throughout: geometry [-1,-1/3] u [1/3,1], Lebesgue weights,
256-bit precision.
"""

import pytest
from mpmath import fabs, im, mp, mpc, mpf, re

from angelesco.curve import (critical_points, find_thresholds, sheet_values,
                             solve_params, w_map)
from angelesco.flow import beta1_prime_check, integrate_flow
from angelesco.kernel import poly_roots
from angelesco.mop import MopSolver
from angelesco.surface import (E1, MultiIndex, equilibrium_density,
                               equilibrium_mass)
from angelesco.szego import cache_for
from angelesco.verify import (IndexSchedule, fit_uniform_constant,
                              predictor_for, run_comparison, split_zeros)


def _report(num, desc, ok):
    print(f"criterion {num:2d} [{desc}]: {'PASS' if ok else 'FAIL'}")
    assert ok, f"acceptance criterion {num} failed: {desc}"


@pytest.fixture(scope="module")
def oracle(leb, ctx):
    return MopSolver(leb, ctx)


def test_criterion_01_curve_residuals(g0, ctx):
    ok = True
    with ctx.workprec():
        gm = g0.mirrored()
        for j in range(1, 21):
            c = mpf(j) / 21
            p = solve_params(g0, c, ctx)
            ends = sorted([p.support(1)[0], p.support(1)[1],
                           p.support(2)[0], p.support(2)[1]])
            crits = sorted(p.z_of_chi(x) for x in critical_points(p))
            ok &= all(fabs(e - z) <= mpf("1e-30") for e, z in zip(ends, crits))
            q = solve_params(gm, 1 - c, ctx)
            ok &= fabs(p.A1 - q.A2) <= mpf("1e-25")
            ok &= fabs(p.A2 - q.A1) <= mpf("1e-25")
            ok &= fabs(p.B1 + q.B2) <= mpf("1e-25")
            ok &= fabs(p.beta_c1 + q.alpha_c2) <= mpf("1e-25")
    _report(1, "curve residuals <= 1e-30, mirror <= 1e-25, 20 ratios", ok)


def test_criterion_02_threshold_symmetry(g0, ctx):
    cs1, cs2 = find_thresholds(g0, ctx)
    with ctx.workprec():
        ok = fabs(cs1 - (1 - cs2)) <= mpf("1e-8")
    _report(2, "|c* - (1 - c**)| <= 1e-8", ok)


def test_criterion_03_ode_vs_algebra(g0, ctx):
    cs1, _ = find_thresholds(g0, ctx)
    with ctx.workprec():
        lo, hi = mpf("0.011"), cs1 - mpf("0.01")
        table = integrate_flow(g0, lo, hi, tol=mpf("1e-10"), ctx=ctx)
        worst = mpf(0)
        for j in range(50):
            c = lo + (hi - lo) * (mpf(j) + mpf(1) / 2) / 50
            st = table.at(c)
            p = solve_params(g0, c, ctx)
            for got, want in ((st.A1, p.A1), (st.A2, p.A2),
                              (st.B1, p.B1), (st.B2, p.B2)):
                worst = max(worst, fabs(got / want - 1))
        ok = worst <= mpf("1e-6")
        for j in range(5):
            c = lo + (hi - lo) * (2 * j + 1) / 10
            _, resid = beta1_prime_check(table.at(c))
            ok &= resid <= mpf("1e-4")
    _report(3, "flow deviation <= 1e-6 on 50 pts, beta' residual <= 1e-4", ok)


def test_criterion_04_equilibrium_masses(g0, ctx):
    ok = True
    with ctx.workprec():
        for cval in ("0.2", "0.5", "0.8"):
            c = mpf(cval)
            p = solve_params(g0, c, ctx)
            ok &= fabs(equilibrium_mass(p, 1) - c) <= mpf("1e-10")
            ok &= fabs(equilibrium_mass(p, 2) - (1 - c)) <= mpf("1e-10")
            for i in (1, 2):
                a, b = p.support(i)
                ok &= all(equilibrium_density(p, i, a + (b - a) * mpf(k) / 24) > 0
                          for k in range(1, 24))
    _report(4, "masses within 1e-10 at c in {0.2,0.5,0.8}, densities > 0", ok)


def test_criterion_05_szego_invariants(g0, leb, ctx):
    p = solve_params(g0, mpf(1) / 2, ctx)
    cache = cache_for(p, leb, ctx)
    ok = True
    with ctx.workprec():
        probes = [mpc(2), mpc(2, 1), mpc(-3, 2), mpc(0, "0.5"), mpc(-2),
                  mpc("0.1", "0.2"), mpc(5, -3), mpc(-1, -1), mpc(0, 5),
                  mpc("1.5", "0.01")]
        for z in probes:
            prod = cache.value(0, z) * cache.value(1, z) * cache.value(2, z)
            ok &= fabs(prod - 1) <= mpf("1e-10")
        for i in (1, 2):
            a, b = p.support(i)
            for k in range(1, 6):
                x = a + (b - a) * mpf(k) / 6
                lhs = cache.value(i, x, "+")
                rhs = cache.value(0, x, "-") * leb[i - 1].rho(x) \
                    * w_map(p.support(i), x, "+", ctx)
                ok &= fabs(lhs / rhs - 1) <= mpf("1e-8")
        quarter = mpf(1) / 4
        vals = [fabs(cache.value(0, p.beta_c1 + mpf(t))) * mpf(t) ** quarter
                for t in ("1e-3", "1e-4", "1e-5")]
        for u, v in zip(vals, vals[1:]):
            ok &= mpf(1) / 2 <= u / v <= 2
    _report(5, "branch product, jump relation, quarter-root factor", ok)


def test_criterion_06_oracle_exactness(oracle, ctx):
    ok = True
    with ctx.workprec():
        p10 = oracle.solve(MultiIndex(1, 0)).P
        ok &= fabs(p10.coeffs[0] - mpf(2) / 3) <= mpf("1e-40")
        p11 = oracle.solve(MultiIndex(1, 1)).P
        ok &= fabs(p11.coeffs[0] + mpf(13) / 27) <= mpf("1e-40")
        ok &= fabs(p11.coeffs[1]) <= mpf("1e-40")
        ok &= fabs(oracle.b(MultiIndex(0, 0), 1) + mpf(2) / 3) <= mpf("1e-40")
        ok &= fabs(oracle.a(MultiIndex(1, 0), 1) - mpf(1) / 27) <= mpf("1e-40")
        bound = mpf(2) ** -128
        for N in range(21):
            for n1 in range(N + 1):
                n = MultiIndex(n1, N - n1)
                ok &= oracle.solve(n).normal
                ok &= oracle.recurrence_residual(n) <= bound
    _report(6, "oracle exact values 1e-40, recurrence residual <= 2^-128", ok)


def test_criterion_07_thm3_recurrence_convergence(oracle, g0, leb, ctx):
    ok = True
    with ctx.workprec():
        half = mpf(1) / 2
        errs_a, errs_b = [], []
        for k in (4, 16):
            n = MultiIndex(k, k)
            pA = solve_params(g0, half, ctx)
            errs_a.append(fabs(oracle.a(n, 1) / pA.A1 - 1))
            pB = solve_params(g0, (n + E1).ratio(ctx), ctx)
            errs_b.append(fabs(oracle.b(n, 1) / pB.B1 - 1))
        ok &= errs_a[1] <= errs_a[0] / 2 and errs_a[1] <= mpf("0.05")
        ok &= errs_b[1] <= errs_b[0] / 2 and errs_b[1] <= mpf("0.05")
    _report(7, "a,b converge: halved from k=4 to k=16 and <= 5%", ok)


def test_criterion_08_thm1_polynomial_asymptotics(oracle, g0, leb, ctx):
    ok = True
    with ctx.workprec():
        z0 = mpc(2)
        for shape in ((1, 1), (1, 2)):
            errs = []
            for k in (4, 16):
                n = MultiIndex(k * shape[0], k * shape[1])
                pred = predictor_for(g0, leb, n.ratio(ctx), ctx)
                errs.append(fabs(oracle.solve(n).P(z0) / pred.P_full(n, z0) - 1))
            ok &= errs[1] < errs[0]
        n = MultiIndex(16, 16)
        pred = predictor_for(g0, leb, n.ratio(ctx), ctx)
        split = split_zeros(poly_roots(oracle.solve(n).P), g0, ctx)
        ok &= split is not None
        a, b = pred.params.support(1)
        x = (a + b) / 2
        obs = mpf(1)
        for r in split[0]:
            obs *= (x - r)
        plus = pred.P_factor(n, 1, x, "+")
        minus = pred.P_factor(n, 1, x, "-")
        ok &= fabs(obs - (plus + minus)) / (fabs(plus) + fabs(minus)) <= mpf("0.1")
    _report(8, "P ratio decreasing on (k,k),(k,2k); boundary <= 10% at k=16", ok)


def test_criterion_09_thm2_type1_asymptotics(oracle, g0, leb, ctx):
    ok = True
    with ctx.workprec():
        z0 = mpc(2, 1)
        errs = []
        for k in (4, 8, 16):
            n = MultiIndex(k, k)
            pred = predictor_for(g0, leb, n.ratio(ctx), ctx)
            errs.append(fabs(oracle.solve(n).A1_poly(z0)
                             / pred.A_form(n, 1, z0) - 1))
        ok &= errs[0] > errs[1] > errs[2]
        n = MultiIndex(16, 16)
        pred = predictor_for(g0, leb, n.ratio(ctx), ctx)
        h_obs = oracle.solve(n - E1).h[0]
        ok &= fabs(pred.h_parent(n, 1) / h_obs - 1) <= mpf("0.05")
    _report(9, "A ratio decreasing at 2+i; h within 5% at k=16", ok)


def test_criterion_10_uniformity_stressor(g0, leb, ctx):
    with ctx.workprec():
        diag = run_comparison(g0, leb, IndexSchedule("diagonal", 2, 12),
                              observables=("a",), probes=(), ctx=ctx)
        alt = run_comparison(g0, leb, IndexSchedule("alternating:1:3", 2, 12),
                             observables=("a",), probes=(), ctx=ctx)
        C_diag = fit_uniform_constant(diag, "a1")
        C_alt = fit_uniform_constant(alt, "a1")
        ratio = C_alt / C_diag
        ok = mpf(1) / 2 <= ratio <= 2
    _report(10, "uniform constant within factor 2 across schedules", ok)


def test_criterion_11_zero_localization(oracle, g0, ctx):
    ok = True
    for k in range(1, 13):
        ok &= oracle.zero_counts(MultiIndex(k, k), g0) == (k, k)
    _report(11, "P_(k,k) has k zeros in each interval, k <= 12", ok)
