"""The affine polynomial of a hyperplane and its singularities, at finite distance and at infinity.

After a linear change of coordinates putting the hyperplane at ``x_n = 0``
the affine polynomial is ``P = f(x_0, .., x_{n-1}, 1)``.  Its graph closure
in ``P^n x C`` is cut out by ``F = f - t * x_n^d``.  Points of that closure
over ``x_n = 0`` where a polar curve of ``P`` escapes to infinity with a
finite limit value ``t`` are the candidate t-singularities; their polar
intersection multiplicity is read off in an affine chart of ``P^n``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from polardeg.ideals import (
    Ideal,
    PositiveDimensional,
    eliminant,
    krull_dimension,
    quotient_dimension,
    saturate,
)
from polardeg.polar import minor_generators
from polardeg.poly import (
    CoordinateChange,
    LinearForm,
    Polynomial,
    linear_change,
    matrix_inverse,
    sample_generic_form,
)
from polardeg.zerodim import PointCluster, ZeroDimScheme, local_multiplicity, point_clusters

TAU = "_t"


class DegreeDrop(ValueError):
    """The affine polynomial lost degree: the hyperplane lies in V."""


@dataclass
class HyperplaneChart:
    """``f`` rewritten so that the hyperplane is ``{x_n = 0}``.

    ``change`` maps new coordinates back to the original ones.
    """

    original: Polynomial
    form: LinearForm
    polynomial: Polynomial
    change: CoordinateChange
    affine: Polynomial

    @property
    def n(self) -> int:
        return self.affine.nvars

    @property
    def degree(self) -> int:
        return self.polynomial.degree()

    def to_original(self, point: Sequence) -> tuple:
        return self.change.apply_to_point(point)


def put_hyperplane_at_infinity(f: Polynomial, form: LinearForm) -> HyperplaneChart:
    if form.is_zero():
        raise ValueError("zero linear form")
    coeffs = form.coefficients
    k = max(i for i, c in enumerate(coeffs) if c)
    others = [j for j in range(f.nvars) if j != k]
    forward = [tuple(1 if j == o else 0 for j in range(f.nvars)) for o in others] + [coeffs]
    back = CoordinateChange(matrix_inverse(forward))
    ring = tuple(f.ring[j] for j in others) + (f.ring[k],)
    g = Polynomial(ring, linear_change(f, back).terms)
    affine = g.dehomogenize(g.nvars - 1)
    if affine.degree() != f.degree():
        raise DegreeDrop(f"affine polynomial has degree {affine.degree()} < {f.degree()}")
    return HyperplaneChart(f, form, g, back, affine)


# affine critical points -------------------------------------------------------------


@dataclass
class AffineSingularities:
    value: int
    scheme: ZeroDimScheme

    def milnor_numbers(self) -> list[tuple[PointCluster, int]]:
        return [(c, c.multiplicity) for c in self.scheme.clusters]


def beta_affine(chart: HyperplaneChart) -> AffineSingularities:
    """Total Milnor number of the critical points of P off the zero fibre."""
    p = chart.affine
    ideal = saturate(Ideal(p.ring, p.gradient()), p)
    dim = krull_dimension(ideal)
    if dim > 0:
        raise PositiveDimensional("critical locus off the zero fibre is not finite", dim)
    if dim < 0:
        return AffineSingularities(0, ZeroDimScheme(ideal, []))
    scheme = point_clusters(ideal)
    value = quotient_dimension(ideal)
    if value != scheme.length:
        raise AssertionError("Milnor numbers do not add up to the length of the critical scheme")
    return AffineSingularities(value, scheme)


# polar curves and their closure at infinity -----------------------------------------


def affine_polar_curve(p: Polynomial, coeffs: Sequence) -> Ideal:
    """Closure of the polar curve of P for the linear form ``coeffs``, minus the zero fibre."""
    return saturate(Ideal(p.ring, minor_generators(p.gradient(), coeffs)), p)


def _lift_ring(p: Polynomial, hom_name: str) -> tuple:
    return p.ring + (hom_name, TAU)


def _homogenize_x(poly: Polynomial, n: int) -> Polynomial:
    """Homogenize in the first ``n`` variables with the next one; the last one has weight 0."""
    top = max((sum(e[:n]) for e in poly.terms), default=0)
    out = {e[:n] + (top - sum(e[:n]),) + e[n + 1 :]: c for e, c in poly.terms.items()}
    return Polynomial(poly.ring, out)


def closure_ideal(p: Polynomial, curve: Ideal, hom_name: str) -> Ideal:
    """Ideal of the closure in P^n x C of {(x, P(x)) : x on the curve}.

    Ring: the variables of P, then the homogenising variable, then t.
    """
    n = p.nvars
    ring = _lift_ring(p, hom_name)
    tau = Polynomial.variable(ring, TAU)
    gens = [g.embed(ring) for g in curve.groebner().basis] + [tau - p.embed(ring)]
    hom = Ideal(ring, [_homogenize_x(g, n) for g in gens])
    return saturate(hom, Polynomial.variable(ring, n))


@dataclass(frozen=True)
class InfinityPoint:
    """A cluster of points (p, t) with p in {x_n = 0}, found in chart ``x_chart = 1``.

    Ring of ``cluster.ideal``: x_0..x_{n-1}, t.
    """

    cluster: PointCluster
    chart: int

    @property
    def rational(self) -> bool:
        return self.cluster.rational_point is not None

    @property
    def point(self) -> tuple | None:
        """Coordinates of p in the rotated frame, including x_n = 0."""
        pt = self.cluster.rational_point
        return None if pt is None else tuple(pt[:-1]) + (mpq(0),)

    @property
    def t(self) -> mpq | None:
        pt = self.cluster.rational_point
        return None if pt is None else pt[-1]

    @property
    def degree(self) -> int:
        return self.cluster.degree

    def t_minimal_polynomial(self) -> Polynomial:
        ideal = self.cluster.ideal
        return eliminant(ideal, len(ideal.ring) - 1)

    def is_zero_value(self) -> bool:
        return self.cluster.ideal.contains(Polynomial.variable(self.cluster.ideal.ring, TAU))


def _boundary_points(boundary: Ideal, n: int) -> list[InfinityPoint]:
    """Points of a zero-dimensional-in-P^{n-1} x C ideal (ring x_0..x_{n-1}, t), chart by chart."""
    ring = boundary.ring
    xs = Polynomial.variables(ring)
    found = []
    for i in range(n):
        chart = boundary + xs[:i] + [xs[i] - 1]
        if chart.is_unit():
            continue
        dim = krull_dimension(chart)
        if dim > 0:
            raise PositiveDimensional("boundary of the polar curve is not finite", dim)
        for c in point_clusters(chart, with_multiplicity=False).clusters:
            found.append(InfinityPoint(c, i))
    return found


def asymptotic_points(p: Polynomial, coeffs: Sequence) -> list[InfinityPoint]:
    """Limit points (p, t) at infinity of the polar curve of P for ``coeffs``."""
    n = p.nvars
    hom_name = _fresh_name(p.ring, "_h")
    curve = affine_polar_curve(p, coeffs)
    if curve.is_unit():
        return []
    closure = closure_ideal(p, curve, hom_name)
    boundary = (closure + [Polynomial.variable(closure.ring, n)]).drop_variable(n, 0)
    tau = Polynomial.variable(boundary.ring, TAU)
    try:
        return _boundary_points(boundary, n)
    except PositiveDimensional:
        # a whole family of limits can only sit over t = 0; drop it and retry
        return _boundary_points(saturate(boundary, tau), n)


def _fresh_name(ring: Sequence[str], base: str) -> str:
    name = base
    while name in ring:
        name += "_"
    return name


@dataclass
class TSingularity:
    point: InfinityPoint
    lam: int

    @property
    def t(self):
        return self.point.t

    @property
    def total(self) -> int:
        return self.point.degree * self.lam


@dataclass
class TSingularityScan:
    candidates: list[InfinityPoint]
    zero_value: list[InfinityPoint]
    singular: list[TSingularity]
    regular: list[InfinityPoint]
    seed: int


def polar_forms(n: int, seed: int) -> list[tuple]:
    """One seeded generic affine form, then every coordinate form."""
    forms = [sample_generic_form(n, seed).coefficients]
    forms += [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    return forms


def t_singularity_candidates(chart: HyperplaneChart, seed: int = 0) -> tuple[list[InfinityPoint], list[InfinityPoint]]:
    """Union over polar forms of the limit points; split into t != 0 and t = 0."""
    p = chart.affine
    seen: dict = {}
    for coeffs in polar_forms(p.nvars, seed):
        for pt in asymptotic_points(p, coeffs):
            seen.setdefault((pt.chart,) + pt.cluster.key, pt)
    nonzero, zero = [], []
    for key in sorted(seen):
        pt = seen[key]
        (zero if pt.is_zero_value() else nonzero).append(pt)
    return nonzero, zero


def lambda_multiplicity(chart: HyperplaneChart, point: InfinityPoint) -> int:
    """Polar intersection multiplicity at (p, t), computed in the chart x_i = 1 of P^n.

    There the polar curve of the fibre coordinate with respect to x_n is the
    closure of the polar curve of P with respect to x_i.
    """
    p = chart.affine
    n = p.nvars
    i = point.chart
    hom_name = _fresh_name(p.ring, "_h")
    coeffs = tuple(1 if j == i else 0 for j in range(n))
    curve = affine_polar_curve(p, coeffs)
    if curve.is_unit():
        return 0
    closure = closure_ideal(p, curve, hom_name)
    local = closure.drop_variable(i, 1)
    h = Polynomial.variable(local.ring, n - 1)
    local = saturate(local, h)
    if point.rational:
        return local_multiplicity(local + [_t_poly(point, local.ring)], _local_point(point, i))
    # the cluster lives in (x_0..x_{n-1}, t) with x_i = 1; move it to the chart ring and add x_n = 0
    cl = point.cluster.ideal.drop_variable(i, 1)
    gens = [Polynomial(local.ring, _insert_zero(g, local.ring)) for g in cl.generators]
    cluster = PointCluster(Ideal(local.ring, gens + [h]), None, point.degree)
    return local_multiplicity(local + [_t_poly(point, local.ring)], cluster)


def _insert_zero(g: Polynomial, ring: tuple) -> dict:
    # g lives in ring minus the homogenising variable (which sits just before t)
    pos = len(ring) - 2
    return {e[:pos] + (0,) + e[pos:]: c for e, c in g.terms.items()}


def _local_point(point: InfinityPoint, chart: int) -> tuple | None:
    pt = point.cluster.rational_point
    if pt is None:
        return None
    xs = [c for j, c in enumerate(pt[:-1]) if j != chart]
    return tuple(xs) + (mpq(0), pt[-1])


def _t_poly(point: InfinityPoint, ring: tuple) -> Polynomial:
    m = point.t_minimal_polynomial()
    last = len(ring) - 1
    return Polynomial(ring, {tuple(e[-1] if j == last else 0 for j in range(len(ring))): c for e, c in m.terms.items()})


def scan_t_singularities(chart: HyperplaneChart, seed: int = 0) -> TSingularityScan:
    nonzero, zero = t_singularity_candidates(chart, seed)
    singular, regular = [], []
    for pt in nonzero:
        lam = lambda_multiplicity(chart, pt)
        if lam > 0:
            singular.append(TSingularity(pt, lam))
        else:
            regular.append(pt)
    return TSingularityScan(nonzero, zero, singular, regular, seed)


def lambda_after_change(chart: HyperplaneChart, point: InfinityPoint, seed: int) -> int:
    """lambda at the image of (p, t) after a random linear change fixing x_n.

    Gives an independent chart for the chart-independence check.
    """
    n = chart.n
    rng = random.Random(seed)
    while True:
        block = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        rows = [row + [0] for row in block] + [[0] * n + [1]]
        try:
            change = CoordinateChange(tuple(tuple(r) for r in rows))
        except ValueError:
            continue
        break
    g = linear_change(chart.polynomial, change)
    moved = HyperplaneChart(chart.original, chart.form, g, change, g.dehomogenize(n))
    if point.point is None:
        raise NotImplementedError("chart change is only implemented for rational points")
    image = change.pull_back_point(point.point)
    target_chart = next(j for j, c in enumerate(image) if c)
    lead = image[target_chart]
    normal = tuple(c / lead for c in image[:-1]) + (point.t,)
    ring = point.cluster.ideal.ring
    xs = Polynomial.variables(ring)
    cl = Ideal(ring, [x - c for x, c in zip(xs, normal)])
    moved_point = InfinityPoint(PointCluster(cl, normal, 1), target_chart)
    return lambda_multiplicity(moved, moved_point)


# the total --------------------------------------------------------------------------


@dataclass
class BetaReport:
    beta_aff: int
    beta_inf: int
    affine: AffineSingularities = field(repr=False)
    scan: TSingularityScan = field(repr=False)
    chart: HyperplaneChart = field(repr=False)

    @property
    def beta(self) -> int:
        return self.beta_aff + self.beta_inf

    def t_singularities(self) -> list[TSingularity]:
        return self.scan.singular


def beta_total(f: Polynomial, form: LinearForm, seed: int = 0) -> BetaReport:
    chart = put_hyperplane_at_infinity(f, form)
    affine = beta_affine(chart)
    scan = scan_t_singularities(chart, seed)
    beta_inf = sum(s.total for s in scan.singular)
    return BetaReport(affine.value, beta_inf, affine, scan, chart)
