import pathlib

import pytest
from mpmath import mpf

from gfasym import gf_new, poly_parse

DATA = pathlib.Path(__file__).parent / "data"

ZW = ("z", "w")
ZWU = ("z", "w", "u")


def frac_mpf(fr):
    """Exact Fraction -> mpf at the ambient working precision."""
    return mpf(fr.numerator) / mpf(fr.denominator)


@pytest.fixture(scope="session")
def delannoy():
    return gf_new(poly_parse("1", ZW), poly_parse("1 - z - w - z*w", ZW))


@pytest.fixture(scope="session")
def cuberoot():
    return gf_new(poly_parse("1", ZW), poly_parse("3 - 3z - w + z^2", ZW))


@pytest.fixture(scope="session")
def chebyshev():
    return gf_new(poly_parse("1", ZW), poly_parse("1 - 2z*w + w^2", ZW))


@pytest.fixture(scope="session")
def toral_gf():
    return gf_new(poly_parse("1", ZW), poly_parse("1 - z*w", ZW))


@pytest.fixture(scope="session")
def squared_gf():
    # (1 - z - w)^2: every variety point is a double pole
    return gf_new(
        poly_parse("1", ZW), poly_parse("1 - 2z - 2w + z^2 + 2z*w + w^2", ZW)
    )


@pytest.fixture(scope="session")
def multinomial3():
    return gf_new(poly_parse("1", ZWU), poly_parse("1 - 1/3z - 1/3w - 1/3u", ZWU))


@pytest.fixture(scope="session")
def delannoy_points(delannoy):
    from gfasym import classify_and_attach, solve_critical_2d

    pts = solve_critical_2d(delannoy, (1, 1))
    pts = [classify_and_attach(delannoy, p) for p in pts]
    pos = next(p for p in pts if p.coords[0].real > 0)
    neg = next(p for p in pts if p.coords[0].real < 0)
    return pos, neg


@pytest.fixture(scope="session")
def cuberoot_point(cuberoot):
    from gfasym import classify_and_attach, solve_critical_2d

    (pt,) = solve_critical_2d(cuberoot, (1, 1))
    return classify_and_attach(cuberoot, pt)


@pytest.fixture(scope="session")
def chebyshev_points(chebyshev):
    from gfasym import classify_and_attach, solve_critical_2d

    pts = solve_critical_2d(chebyshev, (1, 2))
    return [classify_and_attach(chebyshev, p) for p in pts]
