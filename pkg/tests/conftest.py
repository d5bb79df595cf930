import pytest
from mpmath import mpf

from angelesco.curve import Geometry
from angelesco.precision import PrecisionCtx
from angelesco.szego import lebesgue


@pytest.fixture(scope="session")
def ctx():
    return PrecisionCtx(bits=256)


@pytest.fixture(scope="session")
def g0(ctx):
    # reference geometry [-1,-1/3] u [1/3,1]
    with ctx.workprec():
        return Geometry(mpf(-1), mpf(-1) / 3, mpf(1) / 3, mpf(1))


@pytest.fixture(scope="session")
def leb(g0, ctx):
    with ctx.workprec():
        return (lebesgue(g0.interval(1)), lebesgue(g0.interval(2)))
