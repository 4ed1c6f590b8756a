import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import XYZ
from polardeg.groebner import ResourceBudgetExceeded, step_budget
from polardeg.ideals import (
    Ideal,
    PositiveDimensional,
    colon,
    colon_saturate,
    eliminate,
    equidimensional_parts,
    gcd_multivariate,
    intersect,
    krull_dimension,
    quotient_dimension,
    saturate,
    squarefree_part,
)
from polardeg.poly import Polynomial

XY = ("x", "y")


def ideal(ring, *gens):
    return Ideal(ring, [Polynomial.parse(g, ring) for g in gens])


def basis_strings(i, order="grevlex"):
    return sorted(str(g) for g in i.groebner(order).basis)


# Groebner bases -----------------------------------------------------------------------


def test_single_variable_is_a_basis():
    assert basis_strings(ideal(XY, "x")) == ["x"]


def test_lex_basis_of_line_and_double_point():
    assert basis_strings(ideal(XY, "x - y", "y^2"), "lex") == ["x - y", "y^2"]


def test_gradient_ideal_of_cusp():
    assert basis_strings(ideal(XY, "3*x^2", "2*y")) == ["x^2", "y"]


def _sympy_basis(i, order):
    syms = sympy.symbols(i.ring)
    exprs = [sympy.sympify(str(g).replace("^", "**"), locals=dict(zip(i.ring, syms))) for g in i.generators]
    g = sympy.groebner(exprs, *syms, order=order, domain="QQ")
    # sympy returns the reduced basis, monic for the same order
    return {Polynomial.parse(str(p.as_expr()).replace("**", "^"), i.ring) for p in g.exprs}


@st.composite
def small_ideals(draw, max_gens=3):
    ring = XYZ
    gens = []
    for _ in range(draw(st.integers(1, max_gens))):
        terms = draw(
            st.dictionaries(st.tuples(*[st.integers(0, 2)] * 3), st.integers(-5, 5).filter(bool),
                            min_size=1, max_size=4)
        )
        gens.append(Polynomial(ring, terms))
    return Ideal(ring, gens)


@given(small_ideals(), st.sampled_from(["grevlex", "lex"]))
@settings(max_examples=40, deadline=None)
def test_basis_matches_sympy(i, order):
    assert set(i.groebner(order).basis) == _sympy_basis(i, order)


@given(small_ideals())
@settings(max_examples=40, deadline=None)
def test_spolynomials_reduce_to_zero(i):
    assert i.groebner().verify()
    assert i.groebner("lex").verify()


@given(small_ideals(), st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_membership_of_random_combinations(i, seed):
    rng = random.Random(seed)
    xs = Polynomial.variables(i.ring)
    h = Polynomial.zero(i.ring)
    for g in i.generators:
        mult = sum((x.scale(rng.randint(-3, 3)) for x in xs), Polynomial.constant(i.ring, rng.randint(-3, 3)))
        h = h + mult * g
    assert i.contains(h)


def test_normal_form_examples():
    assert ideal(XY, "x^2").groebner().normal_form(Polynomial.parse("x^2*y", XY)).is_zero()
    nf = ideal(XY, "x - y").groebner().normal_form(Polynomial.parse("x + y", XY))
    assert nf == Polynomial.parse("2*y", XY)


@given(small_ideals(), st.integers(0, 1000))
@settings(max_examples=30, deadline=None)
def test_normal_form_is_idempotent(i, seed):
    rng = random.Random(seed)
    f = Polynomial(i.ring, {tuple(rng.randint(0, 3) for _ in range(3)): rng.randint(-9, 9) for _ in range(4)})
    g = i.groebner()
    assert g.normal_form(g.normal_form(f)) == g.normal_form(f)


def test_step_budget_aborts():
    with pytest.raises(ResourceBudgetExceeded):
        with step_budget(5):
            ideal(XYZ, "x^2*y - z^3", "x*y^2 - 1", "x*z - y^2").groebner()


def test_step_budget_from_environment(monkeypatch):
    monkeypatch.setenv("POLARDEG_STEP_BUDGET", "3")
    with pytest.raises(ResourceBudgetExceeded):
        with step_budget():
            ideal(XYZ, "x^2*y - z^3", "x*y^2 - 1", "x*z - y^2").groebner()


# elimination, colon, saturation ----------------------------------------------------


def test_eliminate_twisted_parametrisation():
    ring = ("t", "x", "y")
    out = eliminate(ideal(ring, "x - t^2", "y - t^3"), ["t"])
    assert out.ring == ("x", "y")
    assert out.same_as(ideal(("x", "y"), "y^2 - x^3"))
    for t in range(-3, 4):
        assert all(g.evaluate((t**2, t**3)) == 0 for g in out.generators)


def test_eliminate_nothing():
    i = ideal(XY, "x*y - 1")
    assert eliminate(i, []).same_as(i)


@given(small_ideals(max_gens=2))
@settings(max_examples=25, deadline=None)
def test_eliminated_variables_do_not_occur(i):
    out = eliminate(i, ["x"])
    assert "x" not in out.ring
    full = i.groebner("lex")
    assert all(out.contains(g.drop_variable(0)) for g in full.basis if not any(e[0] for e in g.terms))


def test_saturation_examples():
    assert saturate(ideal(XY, "x*y"), Polynomial.parse("y", XY)).same_as(ideal(XY, "x"))
    assert saturate(ideal(XY, "x^2", "x*y"), Polynomial.parse("x", XY)).is_unit()
    assert saturate(ideal(XY, "x"), Polynomial.parse("y", XY)).same_as(ideal(XY, "x"))
    assert colon(ideal(XY, "x^2", "x*y"), Polynomial.parse("x", XY)).same_as(ideal(XY, "x", "y"))
    assert colon_saturate(ideal(XY, "x^2", "x*y"), Polynomial.parse("x", XY), "colon").same_as(ideal(XY, "x", "y"))


@given(small_ideals(), st.sampled_from(["x", "y", "x*y - z"]))
@settings(max_examples=25, deadline=None)
def test_saturation_is_stable(i, g):
    g = Polynomial.parse(g, XYZ)
    s = saturate(i, g)
    assert saturate(s, g).same_as(s)
    assert s.contains_ideal(i)


@given(small_ideals(max_gens=2), st.sampled_from(["x", "y", "x*y - z"]))
@settings(max_examples=25, deadline=None)
def test_saturation_routes_agree(i, g):
    g = Polynomial.parse(g, XYZ)
    assert saturate(i, g, method="colon").same_as(saturate(i, g, method="rabinowitsch"))


def test_intersection():
    out = intersect(ideal(XY, "x"), ideal(XY, "y"))
    assert out.same_as(ideal(XY, "x*y"))


# dimension and length ---------------------------------------------------------------


@pytest.mark.parametrize(
    "gens, ring, dim",
    [(["x", "y"], XY, 0), (["x"], XYZ, 2), (["1"], XY, -1), (["x*y", "x*z"], XYZ, 2), (["x*y*z"], XYZ, 2)],
)
def test_krull_dimension(gens, ring, dim):
    assert krull_dimension(ideal(ring, *gens)) == dim


def test_polar_curve_of_surface_chart_is_a_curve():
    ring = ("x", "y", "w")
    f = Polynomial.parse("x^2+x*y*w+y^3", ring)
    g = f.gradient()
    # minors of [grad f; (0,0,1)]: df/dx and df/dy
    curve = saturate(Ideal(ring, [g[0], g[1]]), f)
    assert krull_dimension(curve) == 1


@pytest.mark.parametrize("gens, length", [(["x", "y"], 1), (["x^2", "y^3"], 6), (["3*x^2", "2*y"], 2)])
def test_quotient_dimension(gens, length):
    assert quotient_dimension(ideal(XY, *gens)) == length


def test_quotient_dimension_requires_finite_staircase():
    with pytest.raises(PositiveDimensional):
        quotient_dimension(ideal(XY, "x"))


# gcd and squarefree ------------------------------------------------------------------


def test_squarefree_examples():
    P = Polynomial.parse
    assert squarefree_part(P("x^2*y", XY)) == P("x*y", XY)
    assert squarefree_part(P("(x+y)^2*(x-y)", XY)) == P("(x+y)*(x-y)", XY)
    f = P("x*(x*y+z^2)", XYZ)
    assert squarefree_part(f) == f
    assert gcd_multivariate(f, f.diff(0)).is_constant()


@given(small_ideals())
@settings(max_examples=30, deadline=None)
def test_squarefree_part_idempotent_and_divides(i):
    f = i.generators[0]
    if f.is_constant():
        return
    s = squarefree_part(f)
    assert squarefree_part(s) == s
    assert Ideal(f.ring, [s]).contains(f)


def test_gcd_against_sympy():
    P = Polynomial.parse
    a = P("(x*y - z^2)*(x + 2*y)^2", XYZ)
    b = P("(x*y - z^2)*(x - z)", XYZ)
    assert gcd_multivariate(a, b).monic() == P("x*y - z^2", XYZ).monic()


def test_equidimensional_parts_of_plane_and_line():
    # the plane z = 0 union the line x = y = 0
    parts = equidimensional_parts(ideal(XYZ, "x*z", "y*z"))
    dims = sorted(d for _, d in parts)
    assert dims == [1, 2]


def test_rational_coefficients_stay_exact():
    i = ideal(XY, "x/3 - y/7", "y^2 - 1/2")
    for g in i.groebner().basis:
        assert all(isinstance(c, type(mpq(1))) for c in g.terms.values())
