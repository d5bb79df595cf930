"""Functions living on the three-sheeted surface: h, equilibrium measures,
and the geometric factor Phi_n.

h = Pi(chi) (chi - chi*) / ((chi - B1)(chi - B2)) has residue-type behavior
z h -> (1, -c, c-1) on the three sheets, and the equilibrium densities are
its jumps across the cuts.  Phi_n = tau_n (chi-B1)^{n1} (chi-B2)^{n2}
carries the exponential growth of the polynomials; tau_n is the real cube
root of (-1)^{n2} A1^{-n1} A2^{-n2} (B2-B1)^{-|n|}.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import arg, cbrt, fabs, im, log, mp, mpc, mpf, pi, re

from .curve import CurveParams
from .errors import OutsideSupport
from .kernel import integrate_interval
from .precision import DEFAULT_CTX, PrecisionCtx


@dataclass(frozen=True)
class MultiIndex:
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("need n1, n2 >= 0")

    @property
    def size(self) -> int:
        return self.n1 + self.n2

    def ratio(self, ctx: PrecisionCtx = DEFAULT_CTX):
        with ctx.workprec():
            return mpf(self.n1) / self.size

    @property
    def eps(self):
        if min(self.n1, self.n2) == 0:
            raise ValueError("eps_n needs min(n1,n2) >= 1")
        return mpf(1) / min(self.n1, self.n2)

    def __add__(self, other):
        return MultiIndex(self.n1 + other.n1, self.n2 + other.n2)

    def __sub__(self, other):
        return MultiIndex(self.n1 - other.n1, self.n2 - other.n2)


E1 = MultiIndex(1, 0)
E2 = MultiIndex(0, 1)


@dataclass(frozen=True)
class SurfaceValue:
    sheet: int
    base: complex
    side: str
    value: complex


def _h_of_chi(params: CurveParams, chi):
    dz = params.dz_of_chi(chi)
    return (chi - params.chi_star) / (dz * (chi - params.B1) * (chi - params.B2))


def h_value(params: CurveParams, sheet: int, z, side: str = "auto"):
    """Branch of h over z: Pi(chi) (chi-chi*)/((chi-B1)(chi-B2))."""
    from .curve import sheet_values
    with params.ctx.workprec():
        if mp.isinf(z):
            return mpf(0)
        chi = sheet_values(params, z, side)[sheet]
        return _h_of_chi(params, chi)


def equilibrium_density(params: CurveParams, i: int, x):
    """Density of omega_{c,i} at an interior point of its support."""
    from .curve import sheet_values
    ctx = params.ctx
    with ctx.workprec():
        x = mpf(x)
        a, b = params.support(i)
        if not (a < x < b):
            raise OutsideSupport(f"x={mp.nstr(x, 8)} outside support {i}")
        chi_p = sheet_values(params, x, "+")[i]
        chi_m = sheet_values(params, x, "-")[i]
        d = (_h_of_chi(params, chi_p) - _h_of_chi(params, chi_m)) / (2 * pi * mpc(0, 1))
        return re(d)


def equilibrium_mass(params: CurveParams, i: int, rel_tol=None):
    """Total mass of omega_{c,i}; equals c for i=1 and 1-c for i=2."""
    ctx = params.ctx
    with ctx.workprec():
        a, b = params.support(i)
        if rel_tol is None:
            rel_tol = mpf("1e-14")
        return integrate_interval(lambda x: equilibrium_density(params, i, x),
                                  a, b, ctx, chebyshev=True, rel_tol=rel_tol)


def tau_n(params: CurveParams, n: MultiIndex):
    """Real cube root of (-1)^{n2} A1^{-n1} A2^{-n2} (B2-B1)^{-|n|}."""
    with params.ctx.workprec():
        mag = (-n.n1 * log(params.A1) - n.n2 * log(params.A2)
               - n.size * log(params.B2 - params.B1)) / 3
        sign = -1 if n.n2 % 2 else 1
        return sign * mp.e ** mag


def phi_n_log(params: CurveParams, n: MultiIndex, sheet: int, z, side: str = "auto"):
    """(log magnitude, phase) of Phi_n on the requested sheet."""
    from .curve import sheet_values
    with params.ctx.workprec():
        chi = sheet_values(params, z, side)[sheet]
        t = tau_n(params, n)
        w = n.n1 * log(chi - params.B1) + n.n2 * log(chi - params.B2)
        logmag = log(fabs(t)) + re(w)
        phase = im(w) + (pi if t < 0 else mpf(0))
        return logmag, phase


def phi_n_value(params: CurveParams, n: MultiIndex, sheet: int, z, side: str = "auto"):
    """Phi_n on the requested sheet, plus tau_n.

    mpmath floats carry unbounded exponents, so the direct product is safe
    for any |n|; phi_n_log exposes the split representation.
    """
    from .curve import sheet_values
    with params.ctx.workprec():
        chi = sheet_values(params, z, side)[sheet]
        t = tau_n(params, n)
        return (t * (chi - params.B1) ** n.n1 * (chi - params.B2) ** n.n2, t)


def log_potential(params: CurveParams, i: int, z, rel_tol=None):
    """V^{omega_{c,i}}(z) = -int log|z-x| d omega_{c,i}(x)."""
    ctx = params.ctx
    with ctx.workprec():
        a, b = params.support(i)
        z = mpc(z)
        if rel_tol is None:
            rel_tol = mpf("1e-14")
        f = lambda x: -log(abs(z - x)) * equilibrium_density(params, i, x)
        return integrate_interval(f, a, b, ctx, chebyshev=True, rel_tol=rel_tol)


def potential_consistency(params: CurveParams, n: MultiIndex, z_probe, z_probe2):
    """Constants tying log|Phi_n| to the equilibrium potentials.

    On sheet 0, log|Phi_n|/|n| + V^{omega_1+omega_2} is the constant
    (l_1 + l_2)/3; returns (constant at probe 1, constant at probe 2,
    |difference|).
    """
    ctx = params.ctx
    with ctx.workprec():
        out = []
        for z in (z_probe, z_probe2):
            lm, _ = phi_n_log(params, n, 0, z)
            V = log_potential(params, 1, z) + log_potential(params, 2, z)
            out.append(lm / n.size + V)
        return out[0], out[1], fabs(out[0] - out[1])


def potential_consistency_sheet(params: CurveParams, n: MultiIndex, i: int, z_probe):
    """Sheet-i constant (l_{3-i} - 2 l_i)/3 = log|Phi_n^{(i)}|/|n| - V^{omega_i}."""
    ctx = params.ctx
    with ctx.workprec():
        lm, _ = phi_n_log(params, n, i, z_probe)
        return lm / n.size - log_potential(params, i, z_probe)
