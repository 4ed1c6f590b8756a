from itertools import product

import pytest

from conftest import CORPUS, GN_RING, XYZ, XYZW, pt
from polardeg.ideals import Ideal
from polardeg.poly import LinearForm, Polynomial, sample_generic_form
from polardeg.transversality import (
    ADMISSIBLE,
    FAILS_POLAR,
    FAILS_STAR,
    HyperplaneInVariety,
    alpha_at_point,
    check_admissible,
    forms_through,
    generic_alpha,
    hessian,
    hyperplane_in_variety,
    minors,
    non_transversality_points,
    singular_filtration,
    special_points,
)
from polardeg.zerodim import projective_points

P = Polynomial.parse
GN = P("z3^2*z0+z3*z4*z1+z4^2*z2", GN_RING)
GN_P = pt(0, 0, 1, 0, 0)
WHITNEY = P("x^2*z+y^2*w", XYZW)


# determinants ---------------------------------------------------------------------------


def test_minors_of_generic_matrix():
    a, b, c, d = Polynomial.variables(("a", "b", "c", "d"))
    assert minors([[a, b], [c, d]], 2) == [a * d - b * c]
    assert sorted(str(m) for m in minors([[a, b], [c, d]], 1)) == ["a", "b", "c", "d"]


def test_hessian_of_vanishing_hessian_example_is_singular():
    h = hessian(GN)
    assert minors(h, 5) == []  # only nonzero minors are returned
    assert minors(h, 4)


# singular filtration -------------------------------------------------------------------


def test_filtration_of_conic_and_tangent():
    filt = singular_filtration(P("x*(x*y+z^2)", XYZ))
    assert filt.dimensions() == [1, 0]
    assert [p.point for p in filt.point_strata()] == [pt(0, 1, 0)]


def test_filtration_of_whitney_type_surface():
    filt = singular_filtration(WHITNEY)
    # surface, double line, then the two points where the transversal type changes
    assert filt.dimensions() == [2, 1, 0]
    assert [p.point for p in filt.point_strata()] == [pt(0, 0, 0, 1), pt(0, 0, 1, 0)]


def test_filtration_of_smooth_quadric():
    assert singular_filtration(P("x^2+y^2+z^2", XYZ)).dimensions() == [1]


def test_filtration_of_vanishing_hessian_example():
    filt = singular_filtration(GN)
    assert filt.dimensions() == [3, 2, 1]
    assert filt.point_strata() == []


# non-transversality and admissibility --------------------------------------------------


def test_hyperplane_contained_in_variety_is_rejected():
    with pytest.raises(HyperplaneInVariety):
        non_transversality_points(P("x*(x*y+z^2)", XYZ), LinearForm((1, 0, 0)))


def test_cubic_surface_with_w_is_admissible():
    f = P("x^2*z+x*y*w+y^3", XYZW)
    verdict = check_admissible(f, LinearForm((0, 0, 0, 1)))
    assert verdict.status == ADMISSIBLE and verdict.admissible
    assert verdict.report.rational_points() == [pt(0, 0, 1, 0)]


def test_whitney_type_with_w_fails_finiteness():
    verdict = check_admissible(WHITNEY, LinearForm((0, 0, 0, 1)))
    assert verdict.status == FAILS_STAR
    assert verdict.evidence["locus_dimension"] == 1


def test_whitney_type_with_moved_plane_is_admissible():
    verdict = check_admissible(WHITNEY, LinearForm((-1, -1, 0, 1)))
    assert verdict.status == ADMISSIBLE
    assert pt(0, 0, 1, 0) in verdict.report.rational_points()


def test_generic_hyperplane_is_admissible(entry):
    form = sample_generic_form(entry.f.nvars, 3)
    verdict = check_admissible(entry.f, form)
    assert verdict.status == ADMISSIBLE
    assert verdict.report.points == []


@pytest.mark.parametrize("coeffs", [(3, 0, 0, 5, -7), (2, 0, 0, 1, 1)])
def test_vanishing_hessian_tangent_hyperplanes_fail_polar_condition(coeffs):
    # c1 = c2 = 0: tangent at p to the conic of transversal-type change
    verdict = check_admissible(GN, LinearForm(coeffs))
    assert verdict.status == FAILS_POLAR
    assert verdict.polar_dimension == 2
    assert verdict.report.rational_points() == [GN_P]


def test_vanishing_hessian_generic_planes_through_p_have_empty_polar_locus():
    for seed in range(3):
        form = sample_generic_form(5, seed, constraint=GN_P)
        verdict = check_admissible(GN, form)
        assert verdict.status == ADMISSIBLE and verdict.polar_dimension == -1


# alpha ------------------------------------------------------------------------------------


def test_alpha_of_conic_and_tangent_at_tangency():
    assert alpha_at_point(P("x*(x*y+z^2)", XYZ), pt(0, 1, 0), LinearForm((0, 0, 1))) == 1


def test_alpha_of_cubic_surface_at_its_special_point():
    f = P("x^2*z+x*y*w+y^3", XYZW)
    assert alpha_at_point(f, pt(0, 0, 1, 0), LinearForm((0, 0, 0, 1))) == 1


def test_alpha_of_moved_whitney_surface():
    # x^2 z + y^2 w after w -> w - x - y, cut by w = 0
    f = P("x^2*z+y^2*w-x*y^2-y^3", XYZW)
    assert alpha_at_point(f, pt(0, 0, 1, 0), LinearForm((0, 0, 0, 1))) == 1


def test_alpha_rejects_points_off_the_hyperplane():
    with pytest.raises(ValueError):
        alpha_at_point(P("x*(x*y+z^2)", XYZ), pt(0, 1, 0), LinearForm((0, 1, 0)))


def test_alpha_of_vanishing_hessian_at_p_is_zero():
    (point,) = projective_points(Ideal(GN_RING, [Polynomial.variable(GN_RING, i) for i in (0, 1, 3, 4)]))
    value, seeds = generic_alpha(GN, point)
    assert value == 0 and len(seeds) == 3
    for seed in range(3):
        assert alpha_at_point(GN, GN_P, forms_through(point, 5, seed)) == 0


# special points ---------------------------------------------------------------------------


def test_special_points_of_whitney_type_surface():
    rep = special_points(WHITNEY)
    assert rep.special_rational_points() == [pt(0, 0, 0, 1), pt(0, 0, 1, 0)]
    assert rep.alpha == [1, 1]


def test_special_points_of_cone_are_empty():
    rep = special_points(P("x^2+y^2", XYZ))
    assert rep.is_cone and rep.special == []


def test_vanishing_hessian_has_no_special_points():
    assert special_points(GN).special == []


@pytest.mark.parametrize("e", [e for e in CORPUS if e.isolated], ids=lambda e: e.name)
def test_isolated_singular_points_are_special(e):
    f = e.f
    sing = sorted(p.point for p in projective_points(Ideal(f.ring, f.gradient())))
    assert special_points(f).special_rational_points() == sing


@pytest.mark.parametrize("e", [e for e in CORPUS if e.pol], ids=lambda e: e.name)
def test_alpha_of_special_admissible_planes_dominates_generic_alpha(e):
    # non-generic planes through p: coefficients in {-1, 0, 1} on the coordinates vanishing at p
    f = e.f
    rep = special_points(f)
    checked = 0
    for point, generic in zip(rep.candidates, rep.alpha):
        free = [i for i, c in enumerate(point.point) if not c]
        for combo in product((-1, 0, 1), repeat=len(free)):
            if not any(combo):
                continue
            coeffs = [0] * f.nvars
            for i, c in zip(free, combo):
                coeffs[i] = c
            form = LinearForm(tuple(coeffs))
            if hyperplane_in_variety(f, form) or not check_admissible(f, form).admissible:
                continue
            assert alpha_at_point(f, point.point, form) >= generic
            checked += 1
    assert checked or not rep.candidates
