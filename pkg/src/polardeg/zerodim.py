"""Zero-dimensional ideals: point clusters over the rationals and local multiplicities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import sympy
from gmpy2 import mpq

from polardeg.ideals import (
    Ideal,
    PositiveDimensional,
    colon_by_ideal,
    krull_dimension,
    quotient_dimension,
    radical_zero_dim,
    saturate_by_ideal,
)
from polardeg.poly import Polynomial


@dataclass(frozen=True)
class PointCluster:
    """A Galois-stable set of points, given by a radical ideal.

    ``multiplicity`` is per conjugate point; the cluster contributes
    ``degree * multiplicity`` to the length of the scheme.
    """

    ideal: Ideal = field(compare=False)
    rational_point: tuple | None
    degree: int
    multiplicity: int = 1
    key: tuple = ()

    @property
    def total(self) -> int:
        return self.degree * self.multiplicity

    def maximal_ideal(self) -> Ideal:
        return self.ideal


@dataclass
class ZeroDimScheme:
    ideal: Ideal
    clusters: list[PointCluster]

    @property
    def length(self) -> int:
        return sum(c.total for c in self.clusters)

    def rational_points(self) -> list[tuple]:
        return [c.rational_point for c in self.clusters if c.rational_point is not None]


def point_ideal(ring: Sequence[str], point: Sequence) -> Ideal:
    xs = Polynomial.variables(ring)
    return Ideal(tuple(ring), [x - mpq(c) for x, c in zip(xs, point)])


def minimal_polynomial(ideal: Ideal, element: Polynomial) -> list[mpq]:
    """Coefficients (low to high, monic) of the minimal polynomial of ``element`` in R/I."""
    basis = ideal.groebner()
    std = basis.standard_monomials()
    index = {m: i for i, m in enumerate(std)}
    pivots: list[tuple[int, list, list]] = []
    power = Polynomial.constant(ideal.ring, 1)
    for k in range(len(std) + 1):
        nf = basis.normal_form(power)
        vec = [mpq(0)] * len(std)
        for e, c in nf.terms.items():
            vec[index[e]] = c
        comb = [mpq(0)] * (k + 1)
        comb[k] = mpq(1)
        for col, prow, pcomb in pivots:
            c = vec[col]
            if c:
                vec = [a - c * b for a, b in zip(vec, prow)]
                for i, b in enumerate(pcomb):
                    comb[i] -= c * b
        col = next((i for i, v in enumerate(vec) if v), None)
        if col is None:
            return comb
        inv = 1 / vec[col]
        pivots.append((col, [v * inv for v in vec], [c * inv for c in comb]))
        power = basis.normal_form(power * element)
    raise AssertionError("minimal polynomial exceeds the quotient dimension")


def _factor_univariate(coeffs: Sequence[mpq]) -> list[list[mpq]]:
    """Distinct monic irreducible factors over Q of a univariate polynomial (low-to-high)."""
    u = sympy.Symbol("u")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * u**i for i, c in enumerate(coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, u, domain="QQ"))
    out = []
    for fac, _mult in factors:
        cs = [mpq(str(c)) for c in reversed(fac.all_coeffs())]
        lead = cs[-1]
        out.append([c / lead for c in cs])
    return out


def _univariate_in(ring: tuple, coeffs: Sequence[mpq], element: Polynomial) -> Polynomial:
    result = Polynomial.zero(ring)
    power = Polynomial.constant(ring, 1)
    for c in coeffs:
        if c:
            result = result + power.scale(c)
        power = power * element
    return result


def _split(ideal: Ideal, var: int, out: list) -> None:
    if ideal.is_unit():
        return
    ring = ideal.ring
    if var == len(ring):
        out.append(ideal)
        return
    x = Polynomial.variable(ring, var)
    for fac in _factor_univariate(minimal_polynomial(ideal, x)):
        piece = radical_zero_dim((ideal + [_univariate_in(ring, fac, x)]).reduced())
        _split(piece, var + 1, out)


def _split_orbits(ideal: Ideal, seed: int) -> list[Ideal]:
    """Split a cluster into Q-irreducible pieces using a random primitive element."""
    ring = ideal.ring
    length = quotient_dimension(ideal)
    rng = random.Random(seed)
    for _ in range(8):
        u = sum(
            (Polynomial.variable(ring, i).scale(rng.randint(-50, 50) or 1) for i in range(len(ring))),
            Polynomial.zero(ring),
        )
        mp = minimal_polynomial(ideal, u)
        if len(mp) - 1 == length:
            facs = _factor_univariate(mp)
            if len(facs) == 1:
                return [ideal]
            return [(ideal + [_univariate_in(ring, fac, u)]).reduced() for fac in facs]
    return [ideal]


def _rational_point(ideal: Ideal) -> tuple | None:
    basis = ideal.groebner()
    if quotient_dimension(ideal) != 1:
        return None
    point = []
    for i in range(len(ideal.ring)):
        nf = basis.normal_form(Polynomial.variable(ideal.ring, i))
        point.append(nf.constant_coefficient())
    return tuple(point)


def point_clusters(ideal: Ideal, with_multiplicity: bool = True) -> ZeroDimScheme:
    """Decompose V(I) into clusters of conjugate points, with local multiplicities."""
    dim = krull_dimension(ideal)
    if dim > 0:
        raise PositiveDimensional(f"ideal has dimension {dim}", dim)
    if dim < 0:
        return ZeroDimScheme(ideal, [])
    rad = radical_zero_dim(ideal)
    pieces: list[Ideal] = []
    _split(rad, 0, pieces)
    clusters = []
    for piece in pieces:
        for orbit in _split_orbits(piece, seed=len(clusters)) if quotient_dimension(piece) > 1 else [piece]:
            pt = _rational_point(orbit)
            deg = quotient_dimension(orbit)
            key = tuple(str(g) for g in orbit.groebner().basis)
            clusters.append(PointCluster(orbit, pt, deg, 1, key))
    if with_multiplicity:
        clusters = [
            PointCluster(c.ideal, c.rational_point, c.degree, local_multiplicity(ideal, c), c.key)
            for c in clusters
        ]
    clusters.sort(key=lambda c: (c.rational_point is None, c.rational_point or (), c.key))
    return ZeroDimScheme(ideal, clusters)


def primary_component(ideal: Ideal, maximal: Ideal) -> Ideal:
    """I : (I : m^∞), the component of I supported on V(m)."""
    away = saturate_by_ideal(ideal, maximal)
    return colon_by_ideal(ideal, away)


def local_multiplicity(ideal: Ideal, cluster: PointCluster | Sequence) -> int:
    """Length of the primary component at the cluster, per conjugate point.

    Also accepts a rational point.  Works whenever the point is an isolated
    point of V(I), even if I has positive-dimensional components elsewhere.
    Returns 0 when the point is not on V(I).
    """
    if isinstance(cluster, PointCluster):
        m, degree = cluster.ideal, cluster.degree
    else:
        m, degree = point_ideal(ideal.ring, cluster), 1
    if (ideal + m).is_unit():
        return 0
    component = primary_component(ideal, m)
    if component.is_unit():
        return 0
    dim = krull_dimension(component)
    if dim > 0:
        raise PositiveDimensional("point is not isolated in V(I)", dim)
    total = quotient_dimension(component)
    if total % degree:
        raise ValueError(f"cluster length {total} not divisible by degree {degree}")
    return total // degree


def local_multiplicity_by_powers(ideal: Ideal, point: Sequence, max_power: int = 40) -> int:
    """Independent route: dim R/(I + m^N) until it stabilises."""
    m = point_ideal(ideal.ring, point)
    gens = list(m.generators)
    power = [Polynomial.constant(ideal.ring, 1)]
    previous = None
    for _ in range(max_power):
        power = list({a * b for a in power for b in gens})
        value = quotient_dimension(ideal + power)
        if value == previous:
            return value
        previous = value
    raise RuntimeError("multiplicity did not stabilise")


@dataclass(frozen=True)
class ProjectivePoint:
    """A cluster of projective points found in the chart ``x_chart = 1``."""

    cluster: PointCluster
    chart: int

    @property
    def point(self) -> tuple | None:
        return self.cluster.rational_point

    @property
    def degree(self) -> int:
        return self.cluster.degree


def projective_points(ideal: Ideal) -> list[ProjectivePoint]:
    """Points of a homogeneous ideal with finitely many projective zeros.

    Charts partition projective space: chart ``i`` is ``x_0 = .. = x_{i-1} = 0,
    x_i = 1``, so every point is found once, normalised so that its first
    nonzero coordinate is 1.
    """
    ring = ideal.ring
    xs = Polynomial.variables(ring)
    found = []
    for i in range(len(ring)):
        chart = ideal + xs[:i] + [xs[i] - 1]
        if chart.is_unit():
            continue
        dim = krull_dimension(chart)
        if dim > 0:
            raise PositiveDimensional(f"projective zero set has dimension {dim}", dim)
        for c in point_clusters(chart, with_multiplicity=False).clusters:
            found.append(ProjectivePoint(c, i))
    return found
