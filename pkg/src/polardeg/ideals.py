"""Ideals of polynomial rings over the rationals and the usual operations on them.

Everything is routed through the Buchberger kernel in :mod:`polardeg.groebner`.
Affine dimensions are used throughout; for a homogeneous ideal the projective
dimension is one less.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from polardeg import groebner as gb
from polardeg.poly import Polynomial, divide_exact

ELIM_VAR = "_t"


class PositiveDimensional(ValueError):
    """A zero-dimensional ideal was required."""

    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


def _order_for(order, nvars: int) -> gb.MonomialOrder:
    if isinstance(order, tuple):
        return gb.MonomialOrder(order[0], nvars, order[1])
    return gb.make_order(order, nvars)


_recorder: ContextVar[list | None] = ContextVar("polardeg_basis_recorder", default=None)


@contextmanager
def record_bases():
    """Collect every Groebner basis computed inside the block (for post-hoc audits)."""
    bases: list = []
    token = _recorder.set(bases)
    try:
        yield bases
    finally:
        _recorder.reset(token)


class GroebnerBasis:
    """Reduced Groebner basis of an ideal under a fixed monomial order."""

    def __init__(self, ring: tuple, order: gb.MonomialOrder, basis: Sequence[Polynomial]):
        self.ring = ring
        self.order = order
        self.basis = tuple(basis)
        self.leading_monomials = tuple(gb.leading_monomial(g.terms, order) for g in self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.order == other.order
            and set(self.basis) == set(other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.order, frozenset(self.basis)))

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def is_zero(self) -> bool:
        return not self.basis

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise ValueError("ring mismatch")
        r = gb.normal_form(f.terms, [g.terms for g in self.basis], self.order)
        return Polynomial._raw(self.ring, r)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def verify(self) -> bool:
        """Post-hoc Buchberger criterion on the stored basis."""
        return gb.spolys_reduce_to_zero([g.terms for g in self.basis], self.order)

    def standard_monomials(self, limit: int | None = None) -> list[tuple]:
        """Monomials outside the leading-term ideal (requires a finite staircase)."""
        n = len(self.ring)
        if self.is_unit():
            return []
        lms = self.leading_monomials
        # every variable needs a pure power among the leading monomials
        for i in range(n):
            if not any(m[i] and sum(m) == m[i] for m in lms):
                raise PositiveDimensional("ideal is not zero-dimensional", -2)
        found = []
        stack = [(0,) * n]
        seen = {stack[0]}
        while stack:
            m = stack.pop()
            if any(all(a <= b for a, b in zip(lm, m)) for lm in lms):
                continue
            found.append(m)
            if limit is not None and len(found) > limit:
                break
            for i in range(n):
                nm = m[:i] + (m[i] + 1,) + m[i + 1 :]
                if nm not in seen:
                    seen.add(nm)
                    stack.append(nm)
        return sorted(found, key=self.order.key, reverse=True)


class Ideal:
    """Ideal given by generators; reduced bases are memoised per order on the instance."""

    def __init__(self, ring: Sequence[str], generators: Iterable[Polynomial] = ()):
        self.ring = tuple(ring)
        gens = []
        for g in generators:
            if g.ring != self.ring:
                raise ValueError(f"generator ring {g.ring} differs from {self.ring}")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._bases: dict = {}

    @classmethod
    def of(cls, *polys: Polynomial) -> "Ideal":
        return cls(polys[0].ring, polys)

    @classmethod
    def unit(cls, ring) -> "Ideal":
        return cls(ring, [Polynomial.constant(ring, 1)])

    def __repr__(self) -> str:
        return f"Ideal({[str(g) for g in self.generators]}, ring={self.ring})"

    def groebner(self, order="grevlex") -> GroebnerBasis:
        mo = _order_for(order, len(self.ring))
        cached = self._bases.get(mo)
        if cached is None:
            if not self.ring:
                basis = [Polynomial.constant(self.ring, 1)] if self.generators else []
            else:
                raw = gb.buchberger([g.terms for g in self.generators], mo)
                basis = [Polynomial._raw(self.ring, r) for r in raw]
            cached = GroebnerBasis(self.ring, mo, basis)
            self._bases[mo] = cached
            sink = _recorder.get()
            if sink is not None:
                sink.append(cached)
        return cached

    def reduced(self) -> "Ideal":
        """Same ideal with its grevlex basis as generators."""
        basis = self.groebner()
        out = Ideal(self.ring, basis.basis)
        out._bases[basis.order] = basis
        return out

    def __add__(self, other) -> "Ideal":
        extra = other.generators if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, self.generators + tuple(extra))

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators])

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    def contains(self, f: Polynomial) -> bool:
        return self.groebner().contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        g = self.groebner()
        return all(g.contains(h) for h in other.generators)

    def same_as(self, other: "Ideal") -> bool:
        return self.groebner() == other.groebner()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def embed(self, ring) -> "Ideal":
        return Ideal(ring, [g.embed(ring) for g in self.generators])

    def substitute(self, values) -> "Ideal":
        return Ideal(self.ring, [g.substitute(values) for g in self.generators])

    def drop_variable(self, var, value) -> "Ideal":
        gens = [g.drop_variable(var, value) for g in self.generators]
        ring = gens[0].ring if gens else tuple(v for v in self.ring if v != var)
        return Ideal(ring, gens)

    def dimension(self) -> int:
        return krull_dimension(self)

    def vanishes_at(self, point: Sequence) -> bool:
        return all(g.evaluate(point) == 0 for g in self.generators)


def groebner_basis(ideal: Ideal, order="grevlex") -> GroebnerBasis:
    return ideal.groebner(order)


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.normal_form(f)


# elimination, colon, saturation ---------------------------------------------------


def eliminate(ideal: Ideal, drop_vars: Iterable) -> Ideal:
    """Generators of the elimination ideal, returned in the ring without ``drop_vars``."""
    ring = ideal.ring
    drop = [v if isinstance(v, str) else ring[v] for v in drop_vars]
    drop = [v for v in ring if v in drop]
    if not drop:
        return ideal
    keep = [v for v in ring if v not in drop]
    if not keep:
        unit = ideal.is_unit()
        return Ideal((), [Polynomial.constant((), 1)] if unit else [])
    perm_ring = tuple(drop) + tuple(keep)
    moved = Ideal(perm_ring, [g.embed(perm_ring) for g in ideal.generators])
    basis = moved.groebner(("block", len(drop)))
    k = len(drop)
    out = []
    for g in basis:
        lm = gb.leading_monomial(g.terms, basis.order)
        if not any(lm[:k]):
            out.append(Polynomial._raw(tuple(keep), {e[k:]: c for e, c in g.terms.items()}))
    return Ideal(tuple(keep), out)


def intersect(a: Ideal, b: Ideal) -> Ideal:
    """a ∩ b via t·a + (1-t)·b with t eliminated."""
    if a.ring != b.ring:
        raise ValueError("ring mismatch")
    if a.is_zero() or b.is_zero():
        return Ideal(a.ring)
    if a.is_unit():
        return b
    if b.is_unit():
        return a
    name = ELIM_VAR
    while name in a.ring:
        name += "_"
    big = (name,) + a.ring
    t = Polynomial.variable(big, 0)
    gens = [t * g.embed(big) for g in a.generators] + [(1 - t) * g.embed(big) for g in b.generators]
    return eliminate(Ideal(big, gens), [name])


def colon(ideal: Ideal, g: Polynomial) -> Ideal:
    """I : g."""
    if g.is_zero():
        raise ValueError("colon by the zero polynomial")
    if ideal.is_zero():
        return ideal
    if g.is_constant():
        return ideal
    if ideal.contains(g):
        return Ideal.unit(ideal.ring)
    inter = intersect(ideal, Ideal(ideal.ring, [g]))
    return Ideal(ideal.ring, [divide_exact(h, g) for h in inter.generators]).reduced()


def saturate(ideal: Ideal, g: Polynomial, method: str = "rabinowitsch") -> Ideal:
    """I : g^∞, by one elimination with an extra variable or by a stabilised colon chain.

    The extra-variable route is the default: the colon chain goes through an
    intersection per step and can blow up where a single elimination does not.
    """
    if g.is_zero():
        raise ValueError("saturation by the zero polynomial")
    if g.is_constant() or ideal.is_zero():
        return ideal
    if method == "rabinowitsch":
        name = ELIM_VAR
        while name in ideal.ring:
            name += "_"
        big = (name,) + ideal.ring
        s = Polynomial.variable(big, 0)
        gens = [h.embed(big) for h in ideal.generators] + [1 - s * g.embed(big)]
        return eliminate(Ideal(big, gens), [name]).reduced()
    current = ideal.reduced()
    while True:
        nxt = colon(current, g)
        if nxt.same_as(current):
            return current
        current = nxt


def colon_saturate(ideal: Ideal, g: Polynomial, mode: str = "saturate") -> Ideal:
    if mode == "colon":
        return colon(ideal, g)
    if mode == "saturate":
        return saturate(ideal, g)
    raise ValueError(f"unknown mode {mode!r}")


def saturate_by_ideal(ideal: Ideal, other: Ideal | Iterable[Polynomial]) -> Ideal:
    """I : J^∞ as the intersection of I : g^∞ over generators g of J."""
    gens = other.generators if isinstance(other, Ideal) else tuple(other)
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return ideal
    if any(g.is_constant() for g in gens):
        return ideal
    parts = [saturate(ideal, g) for g in gens]
    result = parts[0]
    for p in parts[1:]:
        result = intersect(result, p)
    return result.reduced()


def colon_by_ideal(ideal: Ideal, other: Ideal) -> Ideal:
    """I : J as the intersection of I : g over generators g of J."""
    parts = [colon(ideal, g) for g in other.generators]
    if not parts:
        return Ideal.unit(ideal.ring)
    result = parts[0]
    for p in parts[1:]:
        result = intersect(result, p)
    return result.reduced()


# dimension --------------------------------------------------------------------------


def maximal_independent_set(ideal: Ideal) -> tuple[int, ...] | None:
    """A largest set of variable indices independent modulo the leading-term ideal.

    Returns ``None`` for the unit ideal.
    """
    basis = ideal.groebner()
    if basis.is_unit():
        return None
    n = len(ideal.ring)
    supports = [frozenset(i for i, k in enumerate(m) if k) for m in basis.leading_monomials]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return subset
    return ()


def krull_dimension(ideal: Ideal) -> int:
    """Affine dimension of V(I); -1 for the unit ideal."""
    u = maximal_independent_set(ideal)
    return -1 if u is None else len(u)


def quotient_dimension(ideal: Ideal) -> int:
    """dim_Q of R/I for a zero-dimensional (or unit) ideal."""
    basis = ideal.groebner()
    if basis.is_unit():
        return 0
    try:
        return len(basis.standard_monomials())
    except PositiveDimensional:
        raise PositiveDimensional(
            f"quotient is infinite-dimensional (dimension {krull_dimension(ideal)})", krull_dimension(ideal)
        ) from None


def eliminant(ideal: Ideal, var: int) -> Polynomial:
    """Monic minimal polynomial of the variable ``var`` modulo a zero-dimensional ideal.

    Returned as a polynomial of the same ring involving only ``var``.
    """
    basis = ideal.groebner()
    if basis.is_unit():
        return Polynomial.constant(ideal.ring, 1)
    std = basis.standard_monomials()
    index = {m: i for i, m in enumerate(std)}
    x = Polynomial.variable(ideal.ring, var)
    # coordinate vectors of NF(x^k); stop at the first linear dependency
    pivots: list[tuple[int, list, list]] = []  # (pivot col, reduced row, combination)
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
            exps = [tuple(i if j == var else 0 for j in range(len(ideal.ring))) for i in range(k + 1)]
            return Polynomial(ideal.ring, dict(zip(exps, comb))).monic()
        inv = 1 / vec[col]
        pivots.append((col, [v * inv for v in vec], [c * inv for c in comb]))
        power = power * x
    raise AssertionError("no dependency found within the quotient dimension")


# gcd and squarefree parts -----------------------------------------------------------


def gcd_multivariate(f: Polynomial, g: Polynomial) -> Polynomial:
    """gcd via the generator of ⟨f⟩ ∩ ⟨g⟩ (their lcm); normalised primitive."""
    if f.is_zero():
        return g.content_normalized()
    if g.is_zero():
        return f.content_normalized()
    if f.is_constant() or g.is_constant():
        return Polynomial.constant(f.ring, 1)
    inter = intersect(Ideal(f.ring, [f]), Ideal(f.ring, [g])).reduced()
    if len(inter.generators) != 1:
        raise AssertionError("intersection of principal ideals must be principal")
    return divide_exact(f * g, inter.generators[0]).content_normalized()


def squarefree_part(f: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of ``f`` (normalised primitive)."""
    if f.is_zero():
        raise ValueError("squarefree part of zero")
    if f.is_constant():
        return Polynomial.constant(f.ring, 1)
    g = f
    for i in sorted(f.support()):
        g = gcd_multivariate(g, f.diff(i))
        if g.is_constant():
            return f.content_normalized()
    return divide_exact(f, g).content_normalized()


def squarefree_reduction(ideal: Ideal, max_rounds: int = 8) -> Ideal:
    """Replace basis elements by their squarefree parts until nothing changes.

    Same zero set; not the radical in general.
    """
    current = ideal.reduced()
    for _ in range(max_rounds):
        changed = False
        gens = []
        for g in current.generators:
            s = squarefree_part(g) if not g.is_constant() else g
            if s.degree() < g.degree():
                changed = True
            gens.append(s)
        if not changed:
            return current
        current = Ideal(ideal.ring, gens).reduced()
    return current


def radical_zero_dim(ideal: Ideal) -> Ideal:
    """Radical of a zero-dimensional ideal (add squarefree eliminants)."""
    if ideal.is_unit():
        return ideal
    extra = []
    for i in range(len(ideal.ring)):
        e = eliminant(ideal, i)
        s = squarefree_part(e)
        if s.degree() < e.degree():
            extra.append(s)
    if not extra:
        return ideal.reduced()
    return (ideal + extra).reduced()


def equidimensional_parts(ideal: Ideal) -> list[tuple[Ideal, int]]:
    """Split V(I) into equidimensional pieces (each reported with its affine dimension).

    Pieces of equal dimension may appear more than once; the union of their
    zero sets is V(I).
    """
    parts: list[tuple[Ideal, int]] = []
    remaining = ideal.reduced()
    guard = 0
    while not remaining.is_unit():
        guard += 1
        if guard > 32:
            raise RuntimeError("equidimensional splitting did not terminate")
        u = maximal_independent_set(remaining)
        dim = len(u)
        top = _top_part(remaining, u)
        parts.append((top, dim))
        remaining = saturate_by_ideal(remaining, top)
    return parts


def _top_part(ideal: Ideal, independent: tuple[int, ...]) -> Ideal:
    ring = ideal.ring
    if not independent:
        return ideal
    dep = [v for i, v in enumerate(ring) if i not in independent]
    ind = [ring[i] for i in independent]
    if not dep:
        return ideal
    perm = tuple(dep) + tuple(ind)
    moved = Ideal(perm, [g.embed(perm) for g in ideal.generators])
    k = len(dep)
    basis = moved.groebner(("block", k))
    h = Polynomial.constant(perm, 1)
    for g in basis:
        lm = gb.leading_monomial(g.terms, basis.order)
        head = lm[:k]
        coeff = Polynomial._raw(perm, {e: c for e, c in g.terms.items() if e[:k] == head})
        coeff = Polynomial._raw(perm, {(0,) * k + e[k:]: c for e, c in coeff.terms.items()})
        if not coeff.is_constant():
            h = h * coeff
    if h.is_constant():
        return ideal
    h = squarefree_part(h).embed(ring)
    return saturate(ideal, h)
