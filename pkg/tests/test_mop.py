import pytest
from hypothesis import given, settings, strategies as st
from mpmath import fabs, mp, mpc, mpf

from angelesco.errors import DivisionByZero
from angelesco.mop import (MopSolver, compute_moments, h_constant,
                           recurrence_a, second_kind)
from angelesco.surface import MultiIndex


@pytest.fixture(scope="module")
def solver(leb, ctx):
    return MopSolver(leb, ctx)


def test_moments_exact(leb, ctx):
    mt = compute_moments(leb[0], 3, ctx)
    with ctx.workprec():
        assert fabs(mt.m(0) - mpf(2) / 3) < mpf("1e-70")
        assert fabs(mt.m(1) + mpf(4) / 9) < mpf("1e-70")
        # against brute quadrature
        from angelesco.kernel import integrate_interval
        a, b = leb[0].interval
        q = integrate_interval(lambda x: x ** 5, a, b, ctx)
        assert fabs(mt.m(5) - q) < mpf("1e-60")


def test_p10_exact(solver, ctx):
    res = solver.solve(MultiIndex(1, 0))
    with ctx.workprec():
        assert fabs(res.P.coeffs[0] - mpf(2) / 3) < mpf("1e-40")
        assert fabs(res.P.coeffs[1] - 1) < mpf("1e-40")


def test_p11_exact(solver, ctx):
    res = solver.solve(MultiIndex(1, 1))
    with ctx.workprec():
        assert fabs(res.P.coeffs[0] + mpf(13) / 27) < mpf("1e-40")
        assert fabs(res.P.coeffs[1]) < mpf("1e-40")


def test_recurrence_coefficients_exact(solver, ctx):
    with ctx.workprec():
        assert fabs(solver.b(MultiIndex(0, 0), 1) + mpf(2) / 3) < mpf("1e-40")
        assert fabs(solver.a(MultiIndex(1, 0), 1) - mpf(1) / 27) < mpf("1e-40")


def test_type1_unit_top_moment(solver, leb, ctx):
    # the defining normalization: sum_i int x^{|n|-1} A^{(i)} dmu_i = 1
    n = MultiIndex(3, 2)
    res = solver.solve(n)
    with ctx.workprec():
        total = mpf(0)
        for poly, w in ((res.A1_poly, leb[0]), (res.A2_poly, leb[1])):
            mt = compute_moments(w, n.size + poly.degree, solver.ctx)
            for j, cj in enumerate(poly.coeffs):
                total += cj * mt.m(n.size - 1 + j)
        assert fabs(total - 1) < mpf("1e-60")
        # lower moments are annihilated
        for l in range(n.size - 1):
            t = mpf(0)
            for poly, w in ((res.A1_poly, leb[0]), (res.A2_poly, leb[1])):
                mt = compute_moments(w, n.size + poly.degree, solver.ctx)
                for j, cj in enumerate(poly.coeffs):
                    t += cj * mt.m(l + j)
            assert fabs(t) < mpf("1e-60")


def _shared_solver():
    if "solver" not in _SHARED:
        from angelesco.curve import Geometry
        from angelesco.precision import PrecisionCtx
        from angelesco.szego import lebesgue
        ctx = PrecisionCtx(bits=256)
        with ctx.workprec():
            g = Geometry(mpf(-1), mpf(-1) / 3, mpf(1) / 3, mpf(1))
            _SHARED["solver"] = MopSolver(
                (lebesgue(g.interval(1)), lebesgue(g.interval(2))), ctx)
            _SHARED["ctx"] = ctx
    return _SHARED["solver"], _SHARED["ctx"]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4))
def test_orthogonality_property(n1, n2):
    # P_n is orthogonal to x^l against mu_i for l < n_i
    solver, ctx = _shared_solver()
    n = MultiIndex(n1, n2)
    res = solver.solve(n)
    with ctx.workprec():
        for i, ni in ((1, n1), (2, n2)):
            mt = compute_moments(solver.weights[i - 1], n.size + ni, ctx)
            for l in range(ni):
                val = sum(cj * mt.m(l + j) for j, cj in enumerate(res.P.coeffs))
                assert fabs(val) < mpf("1e-50")


_SHARED = {}


def test_recurrence_residual_grid(solver, ctx):
    with ctx.workprec():
        for n in (MultiIndex(2, 2), MultiIndex(4, 1), MultiIndex(3, 5)):
            assert solver.recurrence_residual(n) < mpf(2) ** -128


def test_zero_counts(solver, g0, ctx):
    assert solver.zero_counts(MultiIndex(5, 5), g0) == (5, 5)
    assert solver.zero_counts(MultiIndex(2, 6), g0) == (2, 6)


def test_second_kind_limit(solver, leb, ctx):
    # z^{n_1+1} R_{n,1}(z) -> h_{n,1}
    n = MultiIndex(2, 2)
    res = solver.solve(n)
    with ctx.workprec():
        z = mpf("1e8")
        r = second_kind(res.P, leb[0], z, ctx)
        assert fabs(z ** (n.n1 + 1) * r / res.h[0] - 1) < mpf("1e-6")


def test_recurrence_a_division_guard(ctx):
    with ctx.workprec():
        with pytest.raises(DivisionByZero):
            recurrence_a(mpf(0), mpf(1))
