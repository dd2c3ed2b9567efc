"""Shared corpus: the divisors, families and maps exercised across the suite."""

import pytest

from logforms.deformation import DeformationSetup, InducingMap
from logforms.logarithmic import Divisor, FreenessVerdict, is_free
from logforms.order import MonomialOrder
from logforms.poly import Poly, parse_poly


def certified(divisor):
    v = is_free(divisor)
    assert v.kind == FreenessVerdict.FREE, f"{divisor} expected free, got {v.kind}"
    return v.basis


@pytest.fixture(scope="session")
def ord_std():
    return MonomialOrder()


@pytest.fixture(scope="session")
def nc2():
    names = ["x", "y"]
    d = Divisor(names, parse_poly("x*y", names), weights=(1, 1))
    return d, certified(d)


@pytest.fixture(scope="session")
def nc3():
    names = ["x", "y", "z"]
    d = Divisor(names, parse_poly("x*y*z", names), weights=(1, 1, 1))
    return d, certified(d)


@pytest.fixture(scope="session")
def nc4():
    names = ["w1", "w2", "w3", "w4"]
    d = Divisor(names, parse_poly("w1*w2*w3*w4", names), weights=(1, 1, 1, 1))
    return d, certified(d)


@pytest.fixture(scope="session")
def calderon():
    names = ["x", "y", "l"]
    d = Divisor(names, parse_poly("x*y*(x-y)*(x+l*y)", names))
    return d, certified(d)


@pytest.fixture(scope="session")
def four_planes_divisor():
    names = ["x1", "x2", "x3"]
    return Divisor(names, parse_poly("x1*x2*x3*(x1+x2+x3)", names), weights=(1, 1, 1))


@pytest.fixture(scope="session")
def four_planes_family():
    """Free total space of the one-parameter family shifting the fourth plane."""
    names = ["x1", "x2", "x3", "s"]
    d = Divisor(names, parse_poly("x1*x2*x3*(x1+x2+x3-s)", names), weights=(1, 1, 1, 1))
    return d, certified(d)


@pytest.fixture(scope="session")
def four_planes_afd(nc4):
    """The germ: four planes in C^3 pulled back from normal crossing in C^4."""
    _, e_basis = nc4
    sn = ["x1", "x2", "x3"]
    comps = [parse_poly(s, sn) for s in ["x1", "x2", "x3", "x1+x2+x3"]]
    imap = InducingMap(sn, ["w1", "w2", "w3", "w4"], comps)
    return DeformationSetup(e_basis, imap, weights=(1, 1, 1))


@pytest.fixture(scope="session")
def four_planes_family_map(nc4):
    _, e_basis = nc4
    sn = ["x1", "x2", "x3", "s"]
    comps = [parse_poly(s, sn) for s in ["x1", "x2", "x3", "x1+x2+x3-s"]]
    imap = InducingMap(sn, ["w1", "w2", "w3", "w4"], comps, s_indices=(3,))
    return DeformationSetup(e_basis, imap, weights=(1, 1, 1, 1))


@pytest.fixture(scope="session")
def lips_disc():
    """Discriminant of the stable unfolding of the lips germ."""
    names = ["X", "U", "W"]
    d = Divisor(names, parse_poly("4*(U+X^2)^3 + 27*W^2", names), weights=(1, 2, 3))
    return d, certified(d)


@pytest.fixture(scope="session")
def lips_inclusion(lips_disc):
    tn = ["X", "W"]
    return InducingMap(tn, ["X", "U", "W"],
                       [parse_poly("X", tn), Poly.zero(2), parse_poly("W", tn)])


@pytest.fixture(scope="session")
def lips_afd(lips_disc, lips_inclusion):
    _, basis = lips_disc
    return DeformationSetup(basis, lips_inclusion, weights=(1, 3))


@pytest.fixture(scope="session")
def four_lines_total():
    """Free 2-parameter extension of the four-concurrent-lines germ."""
    names = ["x", "y", "s1", "s2"]
    d = Divisor(names, parse_poly("x*y*(x-y-s1)*(x+y-2*s1-s2)", names), weights=(1, 1, 1, 1))
    return d, certified(d)


@pytest.fixture(scope="session")
def four_lines_afd(nc4):
    _, e_basis = nc4
    sn = ["x", "y"]
    comps = [parse_poly(s, sn) for s in ["x", "y", "x-y", "x+y"]]
    imap = InducingMap(sn, ["w1", "w2", "w3", "w4"], comps)
    return DeformationSetup(e_basis, imap, weights=(1, 1))


@pytest.fixture(scope="session")
def four_lines_middle_afd(nc4):
    """The 1-parameter total space (a generic four-plane germ in C^3) as an AFD."""
    _, e_basis = nc4
    sn = ["x", "y", "s1"]
    comps = [parse_poly(s, sn) for s in ["x", "y", "x-y-s1", "x+y-2*s1"]]
    imap = InducingMap(sn, ["w1", "w2", "w3", "w4"], comps)
    return DeformationSetup(e_basis, imap, weights=(1, 1, 1))
