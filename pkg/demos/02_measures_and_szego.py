#!/usr/bin/env python3
"""Equilibrium measures and the Szego function on the surface.

Computes the equilibrium densities (as jumps of the algebraic function h
across the cuts), verifies their masses, and evaluates the three branches
of the Szego function, checking the product-of-branches identity.
"""

from mpmath import mp, mpc, mpf

from angelesco.curve import Geometry, solve_params
from angelesco.precision import PrecisionCtx
from angelesco.surface import equilibrium_density, equilibrium_mass
from angelesco.szego import cache_for, lebesgue


def main():
    ctx = PrecisionCtx(bits=256)
    with ctx.workprec():
        g = Geometry(mpf(-1), mpf(-1) / 3, mpf(1) / 3, mpf(1))
        p = solve_params(g, mpf("0.4"), ctx)
        for i in (1, 2):
            a, b = p.support(i)
            mass = equilibrium_mass(p, i)
            print(f"omega_{i} on [{mp.nstr(a, 8)}, {mp.nstr(b, 8)}], "
                  f"mass = {mp.nstr(mass, 20)}")
            xs = [a + (b - a) * mpf(k) / 6 for k in range(1, 6)]
            print("  density:", "  ".join(
                mp.nstr(equilibrium_density(p, i, x), 8) for x in xs))

        weights = (lebesgue(g.interval(1)), lebesgue(g.interval(2)))
        cache = cache_for(p, weights, ctx)
        s0, s1, s2 = cache.at_infinity()
        print()
        print("Szego branches at infinity:")
        for name, v in (("S(0)", s0), ("S(1)", s1), ("S(2)", s2)):
            print(f"  {name} = {mp.nstr(v, 20)}")
        z = mpc(2, 1)
        prod = cache.value(0, z) * cache.value(1, z) * cache.value(2, z)
        print(f"branch product at {z} (should be 1): {mp.nstr(prod, 20)}")


if __name__ == "__main__":
    main()
