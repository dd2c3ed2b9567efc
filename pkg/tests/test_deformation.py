"""Normal spaces, relative T1, singular Milnor number routes, map germs."""

import pytest

from logforms.deformation import (
    DeformationError,
    DeformationSetup,
    INFINITE_OR_UNSTABLE,
    InducingMap,
    ae_codim_damon,
    ae_normal_space_direct,
    cm_regular_sequence_proxy,
    good_equation_witness,
    jacobian_columns,
    ke_discriminant_reduced,
    kev_normal_space,
    mu_e_alternating,
    mu_e_derham,
    mu_e_good_equation,
    pulled_field_columns,
    t1_log,
    theta_prime_minors,
)
from logforms.groebner import (
    groebner_basis,
    is_member,
    kernel_of_map,
    quotient_dimension,
    submodules_equal,
)
from logforms.logarithmic import Divisor, derlog_fields, is_free
from logforms.module import INFINITE, FreeElement, ModulePresentation
from logforms.order import MonomialOrder
from logforms.poly import Poly, parse_poly

ORD = MonomialOrder()


def test_kev_transverse_map_gives_zero(nc2):
    """A submersive inducing map is transverse everywhere: normal space 0."""
    _, basis = nc2
    sn = ["a", "b", "c"]
    comps = [parse_poly("a", sn), parse_poly("b", sn)]
    setup = DeformationSetup(basis, InducingMap(sn, ["x", "y"], comps), weights=(1, 1, 1))
    _, dim = kev_normal_space(setup)
    assert dim == 0


def test_kev_four_planes(four_planes_afd):
    _, dim = kev_normal_space(four_planes_afd)
    assert dim == 1


def test_kev_four_lines(four_lines_afd):
    _, dim = kev_normal_space(four_lines_afd)
    assert dim == 3


def test_t1_trivial_product_family():
    names = ["x", "y", "s"]
    d = Divisor(names, parse_poly("x*y", names), weights=(1, 1, 1))
    basis = is_free(d).basis
    _, dim = t1_log(basis, [2])
    assert dim == 0


def test_t1_four_planes(four_planes_family):
    _, basis = four_planes_family
    _, dim_rel = t1_log(basis, [3])
    _, dim_fib = t1_log(basis, [3], [3])
    assert dim_rel == 1
    assert dim_fib == 1


def test_t1_fibre_matches_kev(four_planes_family, four_planes_afd):
    """The relative T1 mod the base ideal computes the germ's normal space."""
    _, basis = four_planes_family
    _, dim_fib = t1_log(basis, [3], [3])
    _, kev = kev_normal_space(four_planes_afd)
    assert dim_fib == kev


def test_critical_ideal_unit_for_trivial_family():
    names = ["x", "y", "s"]
    d = Divisor(names, parse_poly("x*y", names), weights=(1, 1, 1))
    basis = is_free(d).basis
    minors = theta_prime_minors(basis, [2])
    assert any(m.is_constant() and not m.is_zero() for m in minors)


def test_critical_ideal_calderon_vanishes_on_axis(calderon):
    d, basis = calderon
    minors = theta_prime_minors(basis, [2])
    gb = groebner_basis([FreeElement([parse_poly("x", d.names)]),
                         FreeElement([parse_poly("y", d.names)])], ORD)
    assert minors
    assert all(is_member(FreeElement([m]), gb, ORD) for m in minors)


def test_critical_ideal_four_planes_supported_at_origin(four_planes_family):
    d, basis = four_planes_family
    minors = theta_prime_minors(basis, [3])
    gb = groebner_basis([FreeElement([m]) for m in minors], ORD)
    for name in d.names:
        v = FreeElement([parse_poly(name, d.names)])
        assert is_member(v, gb, ORD)


def test_mu_routes_four_planes(four_planes_family, four_planes_family_map):
    d, basis = four_planes_family
    assert mu_e_alternating(basis, [3]) == 1
    w = good_equation_witness(d.h, d.weights)
    assert mu_e_good_equation(d.h, [3], w, weights=d.weights) == 1
    assert mu_e_derham(four_planes_family_map, bound=12) == 1


def test_mu_routes_four_lines(four_lines_total, four_lines_afd):
    d, basis = four_lines_total
    assert mu_e_alternating(basis, [2, 3]) == 3
    w = good_equation_witness(d.h, d.weights)
    assert mu_e_good_equation(d.h, [2, 3], w, weights=d.weights) == 3
    assert mu_e_derham(four_lines_afd, bound=10) == 3


def test_count_identity(four_planes_family, four_planes_family_map,
                        four_lines_total, four_lines_middle_afd, four_lines_afd):
    """mu(central fibre) + mu(total space) equals the relative T1 dimension."""
    d, basis = four_planes_family
    _, t1 = t1_log(basis, [3])
    assert mu_e_derham(four_planes_family_map, bound=12) + 0 == t1  # total space free
    d2, basis2 = four_lines_total
    # relative T1 of the s1-family through its free extension over (s1, s2)
    _, t1b = t1_log(basis2, [2, 3], [3])
    mu0 = mu_e_derham(four_lines_afd, bound=10)
    mu1 = mu_e_derham(four_lines_middle_afd, bound=10)
    assert mu0 + mu1 == t1b
    assert (mu0, mu1) == (3, 1)


def test_good_equation_witness_euler_and_absence():
    h = parse_poly("x*y*(x+y)", ["x", "y"])
    w = good_equation_witness(h, (1, 1))
    assert w is not None
    # an isolated singularity with no weighted homogeneous structure has none
    h2 = parse_poly("x^5 + y^5 + x^3*y^3", ["x", "y"])
    assert good_equation_witness(h2) is None


def test_ae_direct_examples():
    mn = ["x", "y"]
    fold = [parse_poly("x", mn), parse_poly("y^2", mn)]
    assert ae_normal_space_direct(fold) == 0
    lips = [parse_poly("x", mn), parse_poly("y^3 + x^2*y", mn)]
    assert ae_normal_space_direct(lips) == 1
    unstable = [parse_poly("x", mn), parse_poly("y^3", mn)]
    assert ae_normal_space_direct(unstable, cap=12) == INFINITE_OR_UNSTABLE


def test_ae_direct_rejects_nonvanishing_germ():
    with pytest.raises(DeformationError):
        ae_normal_space_direct([parse_poly("x + 1", ["x"])])


def test_ae_damon_matches_direct(lips_disc, lips_inclusion):
    _, basis = lips_disc
    assert ae_codim_damon(basis, lips_inclusion, weights=(1, 3)) == 1
    # fold: smooth discriminant, identity inclusion
    fn = ["A", "B"]
    DF = Divisor(fn, parse_poly("B", fn), weights=(1, 1))
    vb = is_free(DF).basis
    incl = InducingMap(fn, fn, [parse_poly("A", fn), parse_poly("B", fn)])
    assert ae_codim_damon(vb, incl, weights=(1, 1)) == 0


def test_fitting_reduced_four_planes(four_planes_family):
    _, basis = four_planes_family
    reduced, chi, dim = ke_discriminant_reduced(basis, 3)
    assert reduced and dim == 1
    assert chi == Poly.variable(1, 0)


def test_fitting_not_applicable_for_trivial_family():
    names = ["x", "y", "s"]
    d = Divisor(names, parse_poly("x*y", names), weights=(1, 1, 1))
    basis = is_free(d).basis
    with pytest.raises(DeformationError):
        ke_discriminant_reduced(basis, 2)


def test_cm_proxy(four_planes_family, four_lines_total):
    _, basis = four_planes_family
    pres, _ = t1_log(basis, [3])
    ok, dim = cm_regular_sequence_proxy(pres, [3], seed=0)
    assert ok and dim == 1
    _, basis2 = four_lines_total
    pres2, dim2 = t1_log(basis2, [2, 3])
    assert dim2 == INFINITE
    ok2, cut = cm_regular_sequence_proxy(pres2, [2, 3], seed=0)
    assert ok2 and cut == 4


def test_normal_space_sequence_exactness(nc4, four_planes_divisor, four_planes_afd):
    """The kernel of the map from ambient fields into the normal direction
    quotient is exactly the tangent-field module of the pulled-back divisor."""
    setup = four_planes_afd
    imap = setup.map
    jac = jacobian_columns(imap.components, 3)
    pulled = pulled_field_columns(setup.e_basis, imap.components)
    K = kernel_of_map(jac, pulled, ORD)
    assert submodules_equal(K, derlog_fields(four_planes_divisor), ORD)
    pres = ModulePresentation(4, jac + pulled, nvars=3)
    assert quotient_dimension(pres, ORD) == 1


def test_pip_equals_pop(four_planes_family, lips_disc, four_lines_total):
    """One-parameter free+freeing families: the relative T1 route and the
    annihilator route agree on weighted homogeneous data."""
    cases = [
        (four_planes_family, 3),
        (lips_disc, 1),
        (four_lines_total, 3),  # the s2-direction chain position
    ]
    for (d, basis), s_idx in cases:
        _, pip = t1_log(basis, [s_idx])
        w = good_equation_witness(d.h, d.weights)
        pop = mu_e_good_equation(d.h, [s_idx], w, weights=d.weights)
        assert pip == pop


def test_mu_derham_vanishes_on_free_pullback(nc2):
    """A transverse pullback is free and its top cokernel vanishes."""
    _, basis = nc2
    sn = ["a", "b", "c"]
    comps = [parse_poly("a", sn), parse_poly("b", sn)]
    setup = DeformationSetup(basis, InducingMap(sn, ["x", "y"], comps),
                             weights=(1, 1, 1))
    assert mu_e_derham(setup, bound=8) == 0


def test_mu_trivial_family_is_zero():
    names = ["x", "y", "s"]
    d = Divisor(names, parse_poly("x*y", names), weights=(1, 1, 1))
    basis = is_free(d).basis
    assert mu_e_alternating(basis, [2]) == 0
    w = good_equation_witness(d.h, d.weights)
    assert mu_e_good_equation(d.h, [2], w, weights=d.weights) == 0


def test_good_equation_route_cross_ratio_family(calderon):
    """The weight-zero parameter family: both routes report an infinite value."""
    d, basis = calderon
    w = good_equation_witness(d.h)
    assert w is not None
    assert mu_e_good_equation(d.h, [2], w) == INFINITE
    _, pip = t1_log(basis, [2])
    assert pip == INFINITE
