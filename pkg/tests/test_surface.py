import pytest
from hypothesis import given, settings, strategies as st
from mpmath import exp, fabs, im, mp, mpc, mpf

from angelesco.curve import solve_params
from angelesco.surface import (E1, E2, MultiIndex, equilibrium_density,
                               equilibrium_mass, h_value, log_potential,
                               phi_n_log, phi_n_value, potential_consistency,
                               tau_n)


def test_multi_index_basics(ctx):
    n = MultiIndex(3, 5)
    assert n.size == 8
    with ctx.workprec():
        assert fabs(n.ratio(ctx) - mpf(3) / 8) == 0
        assert fabs(n.eps - mpf(1) / 3) == 0
    assert n + E1 == MultiIndex(4, 5)
    assert n - E2 == MultiIndex(3, 4)
    with pytest.raises(ValueError):
        MultiIndex(-1, 2)
    with pytest.raises(ValueError):
        MultiIndex(4, 0).eps


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 200), st.integers(1, 200))
def test_multi_index_eps_property(n1, n2):
    n = MultiIndex(n1, n2)
    assert n.eps == mpf(1) / min(n1, n2)
    assert 0 < n.ratio() < 1


def test_h_sheet_limits(g0, ctx):
    # z h(z) -> 1 on the outer sheet and -c, c-1 on the cut sheets
    p = solve_params(g0, mpf(1) / 2, ctx)
    with ctx.workprec():
        z = mpf("1e9")
        assert fabs(z * h_value(p, 0, z) - 1) < mpf("1e-8")
        assert fabs(z * h_value(p, 1, z) + p.c) < mpf("1e-8")
        assert fabs(z * h_value(p, 2, z) + (1 - p.c)) < mpf("1e-8")


def test_density_positive_and_frozen(g0, ctx):
    p = solve_params(g0, mpf(1) / 2, ctx)
    with ctx.workprec():
        for i in (1, 2):
            a, b = p.support(i)
            for k in range(1, 12):
                x = a + (b - a) * mpf(k) / 12
                assert equilibrium_density(p, i, x) > 0
        assert fabs(equilibrium_density(p, 1, mpf("-0.65"))
                    - mpf("0.48321235861284163692")) < mpf("1e-18")


def test_density_mirror_symmetry(g0, ctx):
    p = solve_params(g0, mpf(1) / 2, ctx)
    with ctx.workprec():
        x = mpf("0.7")
        assert fabs(equilibrium_density(p, 2, x)
                    - equilibrium_density(p, 1, -x)) < mpf("1e-30")


def test_masses(g0, ctx):
    p = solve_params(g0, mpf("0.3"), ctx)
    with ctx.workprec():
        assert fabs(equilibrium_mass(p, 1) - mpf("0.3")) < mpf("1e-12")
        assert fabs(equilibrium_mass(p, 2) - mpf("0.7")) < mpf("1e-12")


def test_tau_frozen_and_phi_product(g0, ctx):
    p = solve_params(g0, mpf(1) / 2, ctx)
    n = MultiIndex(1, 1)
    with ctx.workprec():
        assert fabs(tau_n(p, n) + mpf("9.10001770519791834152039863585")) < mpf("1e-27")
        # the product of Phi_n over the three sheets is identically 1
        z = mpc(2, 1)
        prod = mpf(1)
        for sheet in (0, 1, 2):
            v, _ = phi_n_value(p, MultiIndex(2, 3), sheet, z)
            prod *= v
        assert fabs(prod - 1) < mpf("1e-60")


def test_phi_log_matches_value(g0, ctx):
    p = solve_params(g0, mpf("0.4"), ctx)
    n = MultiIndex(5, 7)
    with ctx.workprec():
        z = mpc(-2, 1)
        logmag, phase = phi_n_log(p, n, 0, z)
        v, _ = phi_n_value(p, n, 0, z)
        assert fabs(exp(logmag + mpc(0, 1) * phase) - v) < mpf("1e-55") * fabs(v)


def test_potential_consistency(g0, ctx):
    # |n|(-V^{omega_1+omega_2}) differs from log|Phi^(0)| by a constant
    p = solve_params(g0, mpf(1) / 2, ctx)
    with ctx.workprec():
        c1, c2, diff = potential_consistency(p, MultiIndex(3, 3),
                                             mpc(2, 1), mpc(-3, 2))
        assert diff < mpf("1e-11")
        assert fabs(c1 - mpf("1.10413817957")) < mpf("1e-9")


def test_log_potential_decay(g0, ctx):
    # V ~ (mass) * -log|z| far away
    p = solve_params(g0, mpf(1) / 2, ctx)
    with ctx.workprec():
        z = mpf("1e6")
        v = log_potential(p, 1, z)
        assert fabs(v + p.c * mp.log(z)) < mpf("1e-5")
