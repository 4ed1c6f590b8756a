"""Singular filtration, non-transversality of hyperplanes, admissibility and local alpha numbers.

The singular filtration stands in for a Whitney stratification: layer 0 is V,
layer 1 the reduced singular locus, and each later layer collects the
singular loci of the previous layer's equidimensional pieces, the places
where the rank of the Hessian of f drops along a piece (a change of
transversal type), and the pairwise intersections of pieces.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from polardeg.ideals import (
    Ideal,
    PositiveDimensional,
    equidimensional_parts,
    krull_dimension,
    saturate,
    saturate_by_ideal,
    squarefree_reduction,
)
from polardeg.polar import (
    MAX_ROUNDS,
    SEEDS_PER_ROUND,
    GenericityError,
    _kernel,
    cone_apex_set,
    minor_generators,
    polar_dimension,
)
from polardeg.poly import LinearForm, Polynomial, projective_normalize, sample_generic_form
from polardeg.zerodim import PointCluster, ProjectivePoint, local_multiplicity, projective_points

ADMISSIBLE = "admissible"
FAILS_STAR = "fails(*)"
FAILS_POLAR = "fails(ii)"


@dataclass
class Layer:
    """Equidimensional pieces of one filtration step, with affine (cone) dimensions."""

    parts: list[tuple[Ideal, int]]

    @property
    def dimension(self) -> int:
        return max((d for _, d in self.parts), default=-1)

    @property
    def projective_dimension(self) -> int:
        return self.dimension - 1


@dataclass
class Filtration:
    polynomial: Polynomial
    layers: list[Layer]

    def dimensions(self) -> list[int]:
        return [layer.projective_dimension for layer in self.layers]

    def point_strata(self) -> list[ProjectivePoint]:
        points: dict = {}
        for layer in self.layers[1:]:
            for ideal, dim in layer.parts:
                if dim == 1:
                    for p in projective_points(ideal):
                        points.setdefault(_point_key(p), p)
        return [points[k] for k in sorted(points)]

    def deeper_than(self, index: int) -> list[Ideal]:
        if index + 1 < len(self.layers):
            return [ideal for ideal, _ in self.layers[index + 1].parts]
        return []


def _point_key(p: ProjectivePoint) -> tuple:
    if p.point is not None:
        return (0, tuple(p.point), ())
    return (1, (), (p.chart,) + p.cluster.key)


# determinants -----------------------------------------------------------------------


def _det(matrix: Sequence[Sequence[Polynomial]], rows: tuple, cols: tuple, memo: dict) -> Polynomial:
    key = (rows, cols)
    if key in memo:
        return memo[key]
    if len(rows) == 1:
        out = matrix[rows[0]][cols[0]]
    else:
        r0, rest = rows[0], rows[1:]
        out = None
        for k, c in enumerate(cols):
            entry = matrix[r0][c]
            if entry.is_zero():
                continue
            sub = _det(matrix, rest, cols[:k] + cols[k + 1 :], memo)
            term = entry * sub
            if k % 2:
                term = -term
            out = term if out is None else out + term
        if out is None:
            out = Polynomial.zero(matrix[r0][cols[0]].ring)
    memo[key] = out
    return out


def minors(matrix: Sequence[Sequence[Polynomial]], size: int) -> list[Polynomial]:
    """All nonzero ``size`` x ``size`` minors."""
    nrows, ncols = len(matrix), len(matrix[0])
    if size > min(nrows, ncols) or size < 1:
        return []
    memo: dict = {}
    out = []
    for rows in combinations(range(nrows), size):
        for cols in combinations(range(ncols), size):
            d = _det(matrix, rows, cols, memo)
            if not d.is_zero():
                out.append(d)
    return out


def jacobian(polys: Sequence[Polynomial]) -> list[list[Polynomial]]:
    return [p.gradient() for p in polys]


def hessian(f: Polynomial) -> list[list[Polynomial]]:
    return [[gi.diff(j) for j in range(f.nvars)] for gi in f.gradient()]


# filtration -------------------------------------------------------------------------


def _reduced_parts(ideal: Ideal) -> list[tuple[Ideal, int]]:
    """Equidimensional pieces of positive projective dimension or points (affine dim >= 1)."""
    if ideal.is_unit():
        return []
    red = squarefree_reduction(ideal)
    out = []
    for part, dim in equidimensional_parts(red):
        if dim >= 1:
            out.append((squarefree_reduction(part), dim))
    return out


def _singular_locus(part: Ideal, dim: int) -> Ideal:
    codim = len(part.ring) - dim
    gens = list(part.groebner().basis)
    return part + minors(jacobian(gens), codim)


def _hessian_jump(f: Polynomial, part: Ideal, dim: int, hess) -> Ideal | None:
    """Where the rank of Hess f along the piece drops below its generic value."""
    basis = part.groebner()
    n = f.nvars
    for r in range(n, 0, -1):
        ms = minors(hess, r)
        if any(not basis.contains(m) for m in ms):
            jump = part + ms
            if krull_dimension(jump) < dim:
                return jump
            return None
    return None


def _dedupe(parts: list[tuple[Ideal, int]]) -> list[tuple[Ideal, int]]:
    """Drop repeated pieces and pieces contained in a larger piece."""
    unique: list[tuple[Ideal, int]] = []
    for ideal, dim in sorted(parts, key=lambda t: -t[1]):
        if any(dim <= d2 and ideal.contains_ideal(i2) for i2, d2 in unique):
            continue
        unique.append((ideal, dim))
    return unique


def singular_filtration(f: Polynomial) -> Filtration:
    """Iterated reduced singular loci of V(f) (the stratification surrogate)."""
    ring = f.ring
    base = Ideal(ring, [f])
    layers = [Layer([(base, f.nvars - 1)])]
    hess = hessian(f)
    current = _dedupe(_reduced_parts(Ideal(ring, [f] + f.gradient())))
    guard = 0
    while current:
        guard += 1
        if guard > f.nvars + 2:
            raise RuntimeError("singular filtration did not terminate")
        layers.append(Layer(current))
        pieces: list[tuple[Ideal, int]] = []
        for ideal, dim in current:
            if dim <= 1:
                continue
            pieces.extend(_reduced_parts(_singular_locus(ideal, dim)))
            jump = _hessian_jump(f, ideal, dim, hess)
            if jump is not None:
                pieces.extend(_reduced_parts(jump))
        for (a, da), (b, db) in combinations(current, 2):
            pieces.extend(p for p in _reduced_parts(a + b) if p[1] < max(da, db))
        top = max(d for _, d in current)
        current = _dedupe([p for p in pieces if p[1] < top or p[1] <= 1])
        # a layer must shrink: keep only what lies strictly below the previous layer's top
        current = [p for p in current if p[1] < top]
    return Filtration(f, layers)


# non-transversality -----------------------------------------------------------------


@dataclass
class NonTransversalityReport:
    hyperplane: LinearForm
    loci: list[tuple[int, Ideal, int]]  # (layer index, locus ideal, affine dimension)
    points: list[ProjectivePoint]
    finite: bool
    dimension: int  # projective dimension of the union of loci (-1 if empty)

    def rational_points(self) -> list[tuple]:
        return [p.point for p in self.points if p.point is not None]


class HyperplaneInVariety(ValueError):
    pass


def hyperplane_in_variety(f: Polynomial, form: LinearForm) -> bool:
    k = max(i for i, c in enumerate(form.coefficients) if c)
    xs = Polynomial.variables(f.ring)
    rest = sum((xs[j].scale(c) for j, c in enumerate(form.coefficients) if j != k and c), Polynomial.zero(f.ring))
    return f.substitute({k: rest.scale(-1 / form.coefficients[k])}).is_zero()


def non_transversality_points(f: Polynomial, form: LinearForm,
                              filtration: Filtration | None = None) -> NonTransversalityReport:
    if form.is_zero():
        raise ValueError("zero linear form")
    if hyperplane_in_variety(f, form):
        raise HyperplaneInVariety("the hyperplane is contained in V")
    filt = filtration or singular_filtration(f)
    ring = f.ring
    lhat = form.as_polynomial(ring)
    loci = []
    for index, layer in enumerate(filt.layers):
        deeper = filt.deeper_than(index)
        for ideal, dim in layer.parts:
            if dim == 1:
                for p in projective_points(ideal):
                    if p.point is not None and form.evaluate(p.point) == 0:
                        loci.append((index, p.cluster.ideal, 1))
                    elif p.point is None and (p.cluster.ideal + [lhat]).same_as(p.cluster.ideal):
                        loci.append((index, p.cluster.ideal, 1))
                continue
            codim = len(ring) - dim
            gens = list(ideal.groebner().basis) if index else [f]
            matrix = jacobian(gens) + [[Polynomial.constant(ring, c) for c in form.coefficients]]
            locus = ideal + [lhat] + minors(matrix, codim + 1)
            for d in deeper:
                if locus.is_unit():
                    break
                locus = saturate_by_ideal(locus, d)
            if locus.is_unit():
                continue
            ldim = krull_dimension(locus)
            if ldim >= 1:
                loci.append((index, locus, ldim))
    top = max((d for _, _, d in loci), default=0)
    points: list[ProjectivePoint] = []
    finite = top <= 1
    if finite:
        seen: dict = {}
        for index, locus, dim in loci:
            if locus.ring != ring:
                continue
            for p in projective_points(locus):
                seen.setdefault(_point_key(p), p)
        points = [seen[k] for k in sorted(seen)]
    return NonTransversalityReport(form, loci, points, finite, top - 1)


# admissibility ----------------------------------------------------------------------


@dataclass
class AdmissibilityVerdict:
    status: str
    evidence: dict
    report: NonTransversalityReport | None = field(default=None, repr=False)
    polar_dimension: int | None = None

    @property
    def admissible(self) -> bool:
        return self.status == ADMISSIBLE


def check_admissible(f: Polynomial, form: LinearForm, filtration: Filtration | None = None) -> AdmissibilityVerdict:
    """Condition (*) (finite non-transversality) first, then the polar dimension condition."""
    report = non_transversality_points(f, form, filtration)
    if not report.finite:
        worst = max(report.loci, key=lambda t: t[2])
        return AdmissibilityVerdict(
            FAILS_STAR,
            {"locus_dimension": report.dimension, "layer": worst[0],
             "locus": [str(g) for g in worst[1].groebner().basis]},
            report,
        )
    pdim = polar_dimension(f, form)
    if pdim > 1:
        return AdmissibilityVerdict(FAILS_POLAR, {"polar_dimension": pdim}, report, pdim)
    return AdmissibilityVerdict(
        ADMISSIBLE,
        {"polar_dimension": pdim, "non_transversality_points": len(report.points)},
        report,
        pdim,
    )


# alpha ------------------------------------------------------------------------------


def chart_polar_ideal(f: Polynomial, form: LinearForm, chart: int) -> tuple[Ideal, Polynomial]:
    """Affine polar locus of f|_{x_chart=1} for the linear part of the restricted form,
    together with the restricted (affine) form."""
    g = f.dehomogenize(chart)
    lin = [c for j, c in enumerate(form.coefficients) if j != chart]
    if not any(lin):
        raise ValueError("restricted form has no linear part")
    polar = saturate(Ideal(g.ring, minor_generators(g.gradient(), lin)), g)
    xs = Polynomial.variables(g.ring)
    l_aff = sum((x.scale(c) for x, c in zip(xs, lin) if c), Polynomial.zero(g.ring)) + form.coefficients[chart]
    return polar, l_aff


def alpha_at_point(f: Polynomial, point: Sequence, form: LinearForm) -> int:
    """Local intersection multiplicity at p of the hyperplane with the polar curve of f_p."""
    p = projective_normalize(point)
    if form.evaluate(p) != 0:
        raise ValueError("the hyperplane does not pass through the point")
    if f.evaluate(p) != 0:
        raise ValueError("the point is not on V")
    chart = next(i for i, x in enumerate(p) if x)
    polar, l_aff = chart_polar_ideal(f, form, chart)
    local = tuple(x for j, x in enumerate(p) if j != chart)
    return local_multiplicity(polar + [l_aff], local)


def alpha_at_cluster(f: Polynomial, point: ProjectivePoint, form: LinearForm) -> int:
    """Per-point alpha at a (possibly non-rational) cluster through which the form passes."""
    if point.point is not None:
        return alpha_at_point(f, point.point, form)
    chart = point.chart
    polar, l_aff = chart_polar_ideal(f, form, chart)
    cluster_ideal = point.cluster.ideal.drop_variable(chart, 1)
    local = PointCluster(cluster_ideal, None, point.degree)
    return local_multiplicity(polar + [l_aff], local)


def forms_through(point: ProjectivePoint, n_vars: int, seed: int) -> LinearForm:
    """Seeded generic form vanishing at the point (or on the whole cluster)."""
    if point.point is not None:
        return sample_generic_form(n_vars, seed, constraint=point.point)
    basis = point.cluster.ideal.groebner()
    ring = point.cluster.ideal.ring
    vecs = []
    for j in range(n_vars):
        nf = basis.normal_form(Polynomial.variable(ring, j))
        vecs.append(nf)
    # kernel of a -> sum a_j NF(x_j)
    monos = sorted({e for v in vecs for e in v.terms})
    rows = [[v.terms.get(m, mpq(0)) for v in vecs] for m in monos]
    _, kernel = _kernel(rows, n_vars)
    if not kernel:
        raise NotImplementedError("no hyperplane contains the whole cluster")
    rng = random.Random(seed)
    coeffs = [sum((rng.randint(1, 1000) * v[j] for v in kernel), mpq(0)) for j in range(n_vars)]
    return LinearForm(tuple(coeffs)).normalized()


@dataclass
class SpecialPointReport:
    candidates: list[ProjectivePoint]
    alpha: list[int]
    special: list[ProjectivePoint]
    seeds: list[int]
    is_cone: bool = False

    def special_rational_points(self) -> list[tuple]:
        return [p.point for p in self.special if p.point is not None]

    def alpha_of(self, point) -> int:
        target = projective_normalize(point)
        for c, a in zip(self.candidates, self.alpha):
            if c.point == target:
                return a
        raise KeyError(point)


def generic_alpha(f: Polynomial, point: ProjectivePoint, seed: int = 0) -> tuple[int, list[int]]:
    """alpha_p(V): value for seeded generic hyperplanes through p, certified by agreement."""
    n = f.nvars
    tried = []
    for rnd in range(MAX_ROUNDS):
        seeds = [seed + rnd * SEEDS_PER_ROUND + k for k in range(SEEDS_PER_ROUND)]
        values = []
        for s in seeds:
            form = forms_through(point, n, s)
            try:
                values.append(alpha_at_cluster(f, point, form))
            except PositiveDimensional:
                values.append(-1)
        tried.extend(values)
        if len(set(values)) == 1 and values[0] >= 0:
            return values[0], seeds
    raise GenericityError(f"generic alpha unstable at {point}: {tried}")


def special_points(f: Polynomial, seed: int = 0, filtration: Filtration | None = None) -> SpecialPointReport:
    if cone_apex_set(f).is_cone:
        return SpecialPointReport([], [], [], [], is_cone=True)
    filt = filtration or singular_filtration(f)
    candidates = filt.point_strata()
    alphas, seeds = [], []
    for c in candidates:
        a, used = generic_alpha(f, c, seed)
        alphas.append(a)
        seeds.extend(used)
    special = [c for c, a in zip(candidates, alphas) if a > 0]
    return SpecialPointReport(candidates, alphas, special, sorted(set(seeds)))
