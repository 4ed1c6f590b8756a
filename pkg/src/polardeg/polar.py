"""Polar loci, the cone test and the polar degree.

For a homogeneous ``f`` and a linear form with coefficient vector ``c`` the
polar locus is the closure of the set where ``grad f`` is proportional to
``c``, with ``{f = 0}`` removed.  It is a cone.  Off ``{f = 0}`` the Euler
relation gives ``d*f = lambda * form(x)``, so the form never vanishes on the
locus away from ``{f = 0}``; slicing with ``{form = 1}`` therefore loses
nothing and the cone's multiplicity at the origin is the slice length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from polardeg.ideals import Ideal, PositiveDimensional, krull_dimension, quotient_dimension, saturate
from polardeg.poly import LinearForm, Polynomial, sample_generic_form

SEEDS_PER_ROUND = 3
MAX_ROUNDS = 5
AUX_VAR = "_s"


class GenericityError(RuntimeError):
    """Seeded generic choices kept disagreeing."""


@dataclass
class PolarLocus:
    ideal: Ideal
    dimension: int
    polynomial: Polynomial = field(repr=False)
    form: LinearForm = field(repr=False)

    def is_empty(self) -> bool:
        return self.dimension < 0

    def contains(self, point) -> bool:
        return self.ideal.vanishes_at(point)


@dataclass
class ConeTestResult:
    is_cone: bool
    apex_space: list[tuple]


@dataclass
class PolDegreeResult:
    value: int
    seeds: list[int]
    values: list[int]


def minor_generators(grad: list[Polynomial], coeffs) -> list[Polynomial]:
    """2x2 minors of the matrix with rows ``grad`` and ``coeffs``."""
    coeffs = [mpq(c) for c in coeffs]
    out = []
    n = len(grad)
    for i in range(n):
        for j in range(i + 1, n):
            m = grad[i].scale(coeffs[j]) - grad[j].scale(coeffs[i])
            if not m.is_zero():
                out.append(m)
    return out


def polar_ideal(f: Polynomial, form: LinearForm, method: str = "rabinowitsch") -> PolarLocus:
    """Saturated minor ideal of ``[grad f; form]`` with ``{f = 0}`` removed."""
    if form.is_zero():
        raise ValueError("zero linear form")
    minors = minor_generators(f.gradient(), form.coefficients)
    ideal = saturate(Ideal(f.ring, minors), f, method=method)
    return PolarLocus(ideal, krull_dimension(ideal), f, form)


def hyperplane_chart(polys, slice_form: LinearForm, value=1):
    """Restrict to ``{slice_form = value}`` by solving for its last variable.

    Returns the restricted polynomials (ring without that variable) and the
    eliminated index.
    """
    coeffs = slice_form.coefficients
    k = max(i for i, c in enumerate(coeffs) if c)
    ring = polys[0].ring
    xs = Polynomial.variables(ring)
    rest = sum((xs[j].scale(c) for j, c in enumerate(coeffs) if j != k and c), Polynomial.zero(ring))
    image = (Polynomial.constant(ring, value) - rest).scale(1 / coeffs[k])
    return [p.substitute({k: image}).drop_variable(k, 0) for p in polys], k


def polar_slice_ideal(f: Polynomial, form: LinearForm, slice_form: LinearForm | None = None) -> Ideal:
    """Affine slice of the polar cone, localised away from ``{f = 0}`` by an extra variable.

    The quotient by this ideal has the same length as the slice of the
    saturated polar ideal, and the same dimension as the projectivised locus.
    """
    slice_form = form if slice_form is None else slice_form
    minors = minor_generators(f.gradient(), form.coefficients)
    polys, _ = hyperplane_chart(minors + [f], slice_form)
    restricted_f = polys[-1]
    ring = (AUX_VAR,) + restricted_f.ring
    s = Polynomial.variable(ring, 0)
    gens = [p.embed(ring) for p in polys[:-1]] + [1 - s * restricted_f.embed(ring)]
    return Ideal(ring, gens)


def polar_dimension(f: Polynomial, form: LinearForm) -> int:
    """Affine dimension of the polar cone (-1 when empty)."""
    d = krull_dimension(polar_slice_ideal(f, form))
    return -1 if d < 0 else d + 1


def polar_slice_degree(f: Polynomial, form: LinearForm, slice_form: LinearForm | None = None) -> int:
    ideal = polar_slice_ideal(f, form, slice_form)
    dim = krull_dimension(ideal)
    if dim > 0:
        raise PositiveDimensional(f"polar locus has dimension {dim + 1}", dim + 1)
    return quotient_dimension(ideal)


def cone_apex_set(f: Polynomial) -> ConeTestResult:
    """Kernel of p -> sum p_i df/dx_i, over the coefficient vectors of the partials."""
    grad = f.gradient()
    monos = sorted({e for g in grad for e in g.terms})
    n = len(grad)
    # matrix rows = monomials, columns = variables
    rows = [[g.terms.get(m, mpq(0)) for g in grad] for m in monos]
    return ConeTestResult(*_kernel(rows, n))


def _kernel(rows, ncols) -> tuple[bool, list[tuple]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                fac = m[i][c]
                m[i] = [a - fac * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [mpq(0)] * ncols
        v[fc] = mpq(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return bool(basis), basis


def pol_degree(f: Polynomial, seed: int = 0, trials: int = SEEDS_PER_ROUND,
               max_rounds: int = MAX_ROUNDS) -> PolDegreeResult:
    """Polar degree certified by agreement of ``trials`` seeded generic forms."""
    if not f.is_homogeneous():
        raise ValueError("polar degree needs a homogeneous polynomial")
    n = f.nvars
    tried_seeds: list[int] = []
    tried_values: list[int] = []
    for rnd in range(max_rounds):
        seeds = [seed + rnd * trials + k for k in range(trials)]
        values = []
        for s in seeds:
            form = sample_generic_form(n, s)
            try:
                values.append(polar_slice_degree(f, form))
            except PositiveDimensional:
                values.append(-1)
        tried_seeds.extend(seeds)
        tried_values.extend(values)
        if len(set(values)) == 1 and values[0] >= 0:
            return PolDegreeResult(values[0], seeds, values)
    raise GenericityError(f"polar degree unstable over seeds {tried_seeds}: {tried_values}")


def singular_polar_degree(f: Polynomial, form: LinearForm, seed: int = 0) -> int:
    """Multiplicity at the origin of the polar cone of a fixed form."""
    dim = polar_dimension(f, form)
    if dim > 1:
        raise PositiveDimensional(f"polar locus has dimension {dim}", dim)
    if dim < 0:
        return 0
    for k in range(MAX_ROUNDS):
        slice_form = sample_generic_form(f.nvars, seed + 1000 + k)
        try:
            return polar_slice_degree(f, form, slice_form)
        except PositiveDimensional:
            continue
    raise GenericityError("no transverse slice found")
