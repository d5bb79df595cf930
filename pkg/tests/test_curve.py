import pytest
from hypothesis import given, settings, strategies as st
from mpmath import fabs, im, mp, mpc, mpf, re, sqrt

from angelesco.curve import (Geometry, Regime, critical_points, find_thresholds,
                             limit_params, phi_map, sheet_values, solve_params,
                             w_map)
from angelesco.errors import OnCut


def test_geometry_validation(ctx):
    with pytest.raises(ValueError):
        Geometry(-1, 0.5, mpf(1) / 3, 1)
    with pytest.raises(ValueError):
        Geometry(0, 0, 1, 2)


@settings(max_examples=30, deadline=None)
@given(st.tuples(*(st.floats(-5, 5, allow_nan=False) for _ in range(4))))
def test_geometry_ordering_property(vals):
    a1, b1, a2, b2 = vals
    if a1 < b1 < a2 < b2:
        g = Geometry(a1, b1, a2, b2)
        assert g.mirrored().mirrored() == g
    else:
        with pytest.raises(ValueError):
            Geometry(a1, b1, a2, b2)


def test_balanced_symmetry(g0, ctx):
    p = solve_params(g0, mpf(1) / 2, ctx)
    with ctx.workprec():
        assert p.regime is Regime.BALANCED
        # symmetry holds to the Newton residual tolerance 2^-128; the
        # attained accuracy depends on which continuation anchors are warm
        assert fabs(p.A1 - p.A2) < mpf("1e-35")
        assert fabs(p.B1 + p.B2) < mpf("1e-35")
        # frozen solve at the symmetric point
        assert fabs(p.A1 - mpf("0.0282675666268790217780290730726")) < mpf("1e-28")
        assert fabs(p.B2 - mpf("0.644344645545503374547558692948")) < mpf("1e-28")
        # full supports in the balanced regime
        assert p.beta_c1 == g0.beta1
        assert p.alpha_c2 == g0.alpha2


def test_critical_values_hit_branch_points(g0, ctx):
    # the four finite critical values of z(chi) are the support endpoints
    for cval in ("0.2", "0.5", "0.75"):
        p = solve_params(g0, mpf(cval), ctx)
        with ctx.workprec():
            ends = sorted([p.support(1)[0], p.support(1)[1],
                           p.support(2)[0], p.support(2)[1]])
            crits = sorted(p.z_of_chi(x) for x in critical_points(p))
            for e, z in zip(ends, crits):
                assert fabs(e - z) < mpf("1e-40")


def test_pushed_left_regime(g0, ctx):
    p = solve_params(g0, mpf("0.05"), ctx)
    with ctx.workprec():
        assert p.regime is Regime.PUSHED_LEFT
        assert p.beta_c1 < g0.beta1        # support strictly shorter
        assert p.alpha_c2 == g0.alpha2
        # pushed-regime constraint on the residues
        resid = p.A1 / p.c ** 2 + p.A2 / (1 - p.c) ** 2 - (p.B2 - p.B1) ** 2
        assert fabs(resid) < mpf("1e-50")


def test_pushed_right_regime(g0, ctx):
    p = solve_params(g0, mpf("0.95"), ctx)
    with ctx.workprec():
        assert p.regime is Regime.PUSHED_RIGHT
        assert p.alpha_c2 > g0.alpha2
        assert p.beta_c1 == g0.beta1


def test_params_invariants_on_grid(g0, ctx):
    with ctx.workprec():
        for k in range(1, 10):
            p = solve_params(g0, mpf(k) / 10, ctx)
            assert p.A1 > 0 and p.A2 > 0
            assert p.B1 < p.B2
            assert g0.alpha1 <= p.beta_c1 <= g0.beta1
            assert g0.alpha2 <= p.alpha_c2 <= g0.beta2
            assert fabs(p.chi_star - ((1 - p.c) * p.B1 + p.c * p.B2)) == 0


def test_thresholds_frozen(g0, ctx):
    cs1, cs2 = find_thresholds(g0, ctx)
    with ctx.workprec():
        assert fabs(cs1 - mpf("0.1319646512646233550804241800394211483333")) < mpf("1e-25")
        assert fabs(cs1 - (1 - cs2)) < mpf("1e-25")


def test_mirror_symmetry(g0, ctx):
    with ctx.workprec():
        gm = g0.mirrored()
        for cval in ("0.3", "0.6"):
            c = mpf(cval)
            p = solve_params(g0, c, ctx)
            q = solve_params(gm, 1 - c, ctx)
            # agreement is capped by the Newton residual tolerance 2^-128
            assert fabs(p.A1 - q.A2) < mpf("1e-35")
            assert fabs(p.B1 + q.B2) < mpf("1e-35")
            assert fabs(p.beta_c1 + q.alpha_c2) < mpf("1e-35")


def test_limit_params_frozen(g0, ctx):
    lp = limit_params(g0, 0, ctx)
    with ctx.workprec():
        # quadratic rate of the vanishing residue A_{c,1}/c^2 -> r_slope
        assert fabs(lp.r_slope - mpf("2.69416096821287672122071337484")) < mpf("1e-28")
        assert fabs(lp.A2 - mpf(1) / 36) < mpf("1e-70")
        assert fabs(lp.B2 - mpf(2) / 3) < mpf("1e-70")
        # by symmetry of G0 both degenerations share the rate
        assert fabs(limit_params(g0, 1, ctx).r_slope - lp.r_slope) < mpf("1e-60")


def test_limit_rate_matches_solver(g0, ctx):
    lp = limit_params(g0, 0, ctx)
    with ctx.workprec():
        c = mpf("1e-4")
        p = solve_params(g0, c, ctx)
        assert fabs(p.A1 / c ** 2 / lp.r_slope - 1) < mpf("1e-3")


def test_w_map_traces(g0, ctx):
    iv = g0.interval(1)
    with ctx.workprec():
        x = mpf("-0.6")
        wp = w_map(iv, x, "+", ctx)
        wm = w_map(iv, x, "-", ctx)
        assert fabs(wp + wm) < ctx.eps           # opposite traces
        assert re(wp) == 0 and im(wp) > 0
        with pytest.raises(OnCut):
            w_map(iv, x, ctx=ctx)
        # w ~ z at infinity
        z = mpf("1e8")
        assert fabs(w_map(iv, z, ctx=ctx) / z - 1) < mpf("1e-7")


def test_phi_map_exterior(g0, ctx):
    iv = g0.interval(2)
    with ctx.workprec():
        r = (iv[1] - iv[0]) / 4
        for z in (mpc(2), mpc(0, 1), mpc("0.7", "0.01")):
            assert fabs(phi_map(iv, z, ctx)) > r


def test_sheet_values_cover_z(g0, ctx):
    p = solve_params(g0, mpf("0.4"), ctx)
    with ctx.workprec():
        z = mpc(2, 1)
        chis = sheet_values(p, z)
        for chi in chis:
            assert fabs(p.z_of_chi(chi) - z) < mpf("1e-60")
        # outer sheet behaves like z, the others stay near B_i
        zbig = mpf("1e10")
        chis = sheet_values(p, zbig)
        assert fabs(chis[0] / zbig - 1) < mpf("1e-9")
        assert fabs(chis[1] - p.B1) < mpf("1e-9")
        assert fabs(chis[2] - p.B2) < mpf("1e-9")


def test_sheet_values_on_cut(g0, ctx):
    p = solve_params(g0, mpf("0.5"), ctx)
    with ctx.workprec():
        x = mpf("0.6")
        with pytest.raises(OnCut):
            sheet_values(p, x)
        up = sheet_values(p, x, "+")
        dn = sheet_values(p, x, "-")
        # traces on the glued sheets are exchanged complex conjugates
        assert fabs(up[0] - mp.conj(dn[0])) < mpf("1e-60")
        assert fabs(up[0] - dn[2]) < mpf("1e-60")
        assert im(up[0]) != 0
