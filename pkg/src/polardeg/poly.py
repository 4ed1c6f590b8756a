"""Exact sparse multivariate polynomials over the rationals.

A :class:`Polynomial` carries its ordered variable names (its *ring*) and a
mapping from exponent tuples to nonzero ``gmpy2.mpq`` coefficients.  Values
are treated as immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

from gmpy2 import gcd as _gcd
from gmpy2 import mpq, mpz

Rational = mpq

COEFF_RANGE = 1000


class RingMismatch(ValueError):
    pass


def Q(value, den=None) -> mpq:
    """Coerce ints, strings like ``"4/27"`` and fractions to ``mpq``."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def grevlex_key(exp: Sequence[int]) -> tuple:
    # smaller key == larger monomial
    return (-sum(exp),) + tuple(reversed(exp))


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.ring = tuple(ring)
        n = len(self.ring)
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} does not match ring {self.ring}")
                c = mpq(c)
                if c:
                    clean[tuple(exp)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: tuple, terms: dict) -> "Polynomial":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring) -> "Polynomial":
        return cls(ring)

    @classmethod
    def constant(cls, ring, c) -> "Polynomial":
        ring = tuple(ring)
        return cls(ring, {(0,) * len(ring): c})

    @classmethod
    def variable(cls, ring, name_or_index) -> "Polynomial":
        ring = tuple(ring)
        i = name_or_index if isinstance(name_or_index, int) else ring.index(name_or_index)
        exp = [0] * len(ring)
        exp[i] = 1
        return cls(ring, {tuple(exp): 1})

    @classmethod
    def variables(cls, ring) -> list["Polynomial"]:
        return [cls.variable(ring, i) for i in range(len(ring))]

    @classmethod
    def parse(cls, text: str, ring: Sequence[str] | None = None) -> "Polynomial":
        from polardeg.parsing import parse_polynomial

        return parse_polynomial(text, ring)

    # basic queries ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coefficient(self) -> mpq:
        return self.terms.get((0,) * self.nvars, mpq(0))

    def degree(self, var: int | str | None = None) -> int:
        """Total degree, or the degree in one variable; -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = var if isinstance(var, int) else self.ring.index(var)
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_component(self, deg: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {e: c for e, c in self.terms.items() if sum(e) == deg})

    def support(self) -> set[int]:
        """Indices of variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def leading_term(self, key=grevlex_key) -> tuple[tuple, mpq]:
        e = min(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, key=grevlex_key) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term(key)
        return self.scale(1 / c)

    def content_normalized(self) -> "Polynomial":
        """Scale to a primitive integer polynomial with positive leading coefficient."""
        if not self.terms:
            return self
        den = reduce(lambda a, b: a * b // _gcd(a, b), (c.denominator for c in self.terms.values()), mpz(1))
        nums = [c * den for c in self.terms.values()]
        g = reduce(_gcd, (abs(mpz(x)) for x in nums), mpz(0))
        lead = self.terms[min(self.terms, key=grevlex_key)]
        s = mpq(den, g) if lead > 0 else -mpq(den, g)
        return self.scale(s)

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.ring, other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._raw(self.ring, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> "Polynomial":
        return self.scale(other)

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            q = divide_exact(self, other)
            return q
        return self.scale(1 / mpq(other))

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = mpq(c)
        if not c:
            return Polynomial._raw(self.ring, {})
        return Polynomial._raw(self.ring, {e: c * v for e, v in self.terms.items()})

    def mul_monomial(self, exp: Sequence[int], c=1) -> "Polynomial":
        c = mpq(c)
        return Polynomial._raw(
            self.ring, {tuple(a + b for a, b in zip(e, exp)): c * v for e, v in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, mpq, mpz)):
            return self == Polynomial.constant(self.ring, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # calculus and evaluation ---------------------------------------------

    def diff(self, var: int | str) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring.index(var)
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1 :]
                out[ne] = c * k
        return Polynomial._raw(self.ring, out)

    def gradient(self) -> list["Polynomial"]:
        return [self.diff(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence) -> mpq:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, ring has {self.nvars}")
        pt = [mpq(x) for x in point]
        total = mpq(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def substitute(self, values: Mapping[int, "Polynomial | object"]) -> "Polynomial":
        """Replace variables (by index) with polynomials of the same ring or constants."""
        subs = {
            i: (v if isinstance(v, Polynomial) else Polynomial.constant(self.ring, v)) for i, v in values.items()
        }
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = subs[i] ** k
            return powers[key]

        result = Polynomial.zero(self.ring)
        for e, c in self.terms.items():
            kept = tuple(0 if i in subs else k for i, k in enumerate(e))
            term = Polynomial._raw(self.ring, {kept: c})
            for i, k in enumerate(e):
                if k and i in subs:
                    term = term * power(i, k)
            result = result + term
        return result

    # ring bookkeeping ---------------------------------------------------

    def embed(self, ring: Sequence[str]) -> "Polynomial":
        """Re-express in a ring containing all variables that occur."""
        ring = tuple(ring)
        if ring == self.ring:
            return self
        pos = []
        for i in range(self.nvars):
            name = self.ring[i]
            if name in ring:
                pos.append(ring.index(name))
            else:
                pos.append(None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(ring)
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise RingMismatch(f"variable {self.ring[i]} missing from {ring}")
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return Polynomial._raw(ring, out)

    def drop_variable(self, var: int | str, value=None) -> "Polynomial":
        """Remove a variable, setting it to ``value`` (default: require absence)."""
        i = var if isinstance(var, int) else self.ring.index(var)
        ring = self.ring[:i] + self.ring[i + 1 :]
        out: dict = {}
        value = None if value is None else mpq(value)
        for e, c in self.terms.items():
            if e[i] and value is None:
                raise ValueError(f"variable {self.ring[i]} occurs in polynomial")
            if e[i]:
                c = c * value ** e[i]
            ne = e[:i] + e[i + 1 :]
            v = out.get(ne)
            out[ne] = c if v is None else v + c
        return Polynomial._raw(ring, {e: c for e, c in out.items() if c})

    # charts ---------------------------------------------------------------

    def dehomogenize(self, var: int | str) -> "Polynomial":
        """Set ``var = 1`` and drop it from the ring."""
        if not self.is_homogeneous():
            raise ValueError("dehomogenize requires a homogeneous polynomial")
        return self.drop_variable(var, 1)

    def homogenize(self, var: str, degree: int | None = None, position: int | None = None) -> "Polynomial":
        """Multiply each term by ``var^(degree - deg(term))``; ``var`` is inserted into the ring.

        If ``var`` already belongs to the ring it is used in place (and must not occur).
        """
        d = self.degree() if degree is None else degree
        if self.terms and d < self.degree():
            raise ValueError(f"target degree {d} below polynomial degree {self.degree()}")
        if var in self.ring:
            i = self.ring.index(var)
            if any(e[i] for e in self.terms):
                raise ValueError(f"{var} already occurs")
            ring = self.ring
            out = {e[:i] + (d - sum(e),) + e[i + 1 :]: c for e, c in self.terms.items()}
            return Polynomial._raw(ring, out)
        i = self.nvars if position is None else position
        ring = self.ring[:i] + (var,) + self.ring[i:]
        out = {e[:i] + (d - sum(e),) + e[i:]: c for e, c in self.terms.items()}
        return Polynomial._raw(ring, out)

    # printing -------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple, mpq]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(self.ring, e) if k
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = _format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_format_rational(a)}*{mono}"
            if idx == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, ring={self.ring})"


def _format_rational(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_rational(c) -> str:
    return _format_rational(mpq(c))


def poly_arithmetic(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def divide_exact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact quotient ``a / b``; raises ``ValueError`` if ``b`` does not divide ``a``."""
    a._check(b)
    if not b.terms:
        raise ZeroDivisionError("division by zero polynomial")
    lb, cb = b.leading_term()
    rest = dict(a.terms)
    quotient: dict = {}
    while rest:
        e = min(rest, key=grevlex_key)
        c = rest[e]
        if any(x < y for x, y in zip(e, lb)):
            raise ValueError("polynomial does not divide exactly")
        qe = tuple(x - y for x, y in zip(e, lb))
        qc = c / cb
        quotient[qe] = qc
        for eb, vb in b.terms.items():
            ne = tuple(x + y for x, y in zip(qe, eb))
            v = rest.get(ne, 0) - qc * vb
            if v:
                rest[ne] = v
            else:
                rest.pop(ne, None)
    return Polynomial._raw(a.ring, quotient)


def euler_check(f: Polynomial) -> bool:
    """Euler relation sum x_i df/dx_i == deg(f) * f for homogeneous ``f``."""
    xs = Polynomial.variables(f.ring)
    lhs = sum((x * f.diff(i) for i, x in enumerate(xs)), Polynomial.zero(f.ring))
    return lhs == f * f.degree()


# linear forms and coordinate changes -------------------------------------


@dataclass(frozen=True)
class LinearForm:
    """A homogeneous linear form sum c_i x_i; defines the hyperplane {form = 0}."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(mpq(c) for c in self.coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def evaluate(self, point: Sequence) -> mpq:
        return sum((c * mpq(x) for c, x in zip(self.coefficients, point)), mpq(0))

    def as_polynomial(self, ring: Sequence[str]) -> Polynomial:
        ring = tuple(ring)
        if len(ring) != len(self.coefficients):
            raise ValueError("linear form length does not match ring")
        n = len(ring)
        return Polynomial(
            ring, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(self.coefficients)}
        )

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "LinearForm":
        if any(sum(e) != 1 for e in p.terms):
            raise ValueError(f"{p} is not a linear form")
        coeffs = [mpq(0)] * p.nvars
        for e, c in p.terms.items():
            coeffs[e.index(1)] = c
        return cls(tuple(coeffs))

    @classmethod
    def coordinate(cls, n: int, i: int) -> "LinearForm":
        return cls(tuple(1 if j == i else 0 for j in range(n)))

    def normalized(self) -> "LinearForm":
        """Primitive integer representative (projective normalisation)."""
        p = self.as_polynomial(tuple(f"x{i}" for i in range(len(self))))
        return LinearForm.from_polynomial(p.content_normalized())

    def format(self, ring: Sequence[str]) -> str:
        return str(self.as_polynomial(ring))


@dataclass(frozen=True)
class CoordinateChange:
    """Invertible substitution x_i -> sum_j matrix[i][j] x_j."""

    matrix: tuple

    def __post_init__(self):
        rows = tuple(tuple(mpq(v) for v in row) for row in self.matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("coordinate change matrix must be square")
        object.__setattr__(self, "matrix", rows)
        if determinant(rows) == 0:
            raise ValueError("coordinate change matrix is singular")

    @classmethod
    def identity(cls, n: int) -> "CoordinateChange":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def inverse(self) -> "CoordinateChange":
        return CoordinateChange(matrix_inverse(self.matrix))

    def apply_to_point(self, point: Sequence) -> tuple:
        """Image M p; a zero x of f∘M maps to the zero M x of f."""
        return tuple(sum((a * mpq(x) for a, x in zip(row, point)), mpq(0)) for row in self.matrix)

    def pull_back_point(self, point: Sequence) -> tuple:
        """Preimage M^-1 p: where a zero p of f sits on f∘M."""
        return self.inverse().apply_to_point(point)

    def pull_back_form(self, form: LinearForm) -> LinearForm:
        """The form l∘M, whose zero set is the preimage of {l = 0}."""
        n = self.size
        return LinearForm(
            tuple(sum((form.coefficients[i] * self.matrix[i][j] for i in range(n)), mpq(0)) for j in range(n))
        )


def determinant(rows) -> mpq:
    m = [list(map(mpq, r)) for r in rows]
    n = len(m)
    det = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] / m[col][col]
                for k in range(col, n):
                    m[r][k] -= f * m[col][k]
    return det


def matrix_inverse(rows) -> tuple:
    n = len(rows)
    m = [list(map(mpq, r)) + [mpq(1 if i == j else 0) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(tuple(r[n:]) for r in m)


def linear_change(f: Polynomial, change: CoordinateChange) -> Polynomial:
    """Return f∘M.  Degree and homogeneity are preserved."""
    if change.size != f.nvars:
        raise ValueError("coordinate change size does not match ring")
    xs = Polynomial.variables(f.ring)
    images = {
        i: sum((c * xs[j] for j, c in enumerate(row) if c), Polynomial.zero(f.ring))
        for i, row in enumerate(change.matrix)
    }
    return f.substitute(images)


def chart_maps(f: Polynomial, var: int | str, direction: str, degree: int | None = None,
               name: str | None = None) -> Polynomial:
    """Dehomogenize at ``var`` or homogenize with ``var`` up to ``degree``."""
    if direction == "dehomogenize":
        return f.dehomogenize(var)
    if direction == "homogenize":
        if isinstance(var, int):
            if name is None:
                raise ValueError("homogenize by index needs a variable name")
            return f.homogenize(name, degree, position=var)
        return f.homogenize(var, degree)
    raise ValueError(f"unknown direction {direction!r}")


# generic forms -----------------------------------------------------------


class ConstraintError(ValueError):
    pass


def _nonzero_int(rng: random.Random) -> int:
    v = rng.randint(1, COEFF_RANGE)
    return v if rng.random() < 0.5 else -v


def sample_generic_form(n_vars: int, seed: int, constraint: Sequence | None = None,
                        retries: int = 16) -> LinearForm:
    """Deterministic pseudo-random form with nonzero integer coefficients in [-1000, 1000].

    With ``constraint`` the last coefficient paired with a nonzero coordinate of
    the point is solved for so that the form vanishes there; it is zero exactly
    when the point is a coordinate point.  The result is scaled to a primitive
    integer vector.
    """
    if n_vars < 2:
        raise ValueError("need at least two variables")
    rng = random.Random(seed)
    if constraint is None:
        return LinearForm(tuple(_nonzero_int(rng) for _ in range(n_vars)))
    p = [mpq(x) for x in constraint]
    if len(p) != n_vars:
        raise ValueError("constraint point has wrong length")
    support = [i for i, x in enumerate(p) if x]
    if not support:
        raise ConstraintError("constraint point is zero")
    k = support[-1]
    forced_zero = len(support) == 1
    for _ in range(retries):
        coeffs = [mpq(_nonzero_int(rng)) for _ in range(n_vars)]
        coeffs[k] = -sum((c * x for i, (c, x) in enumerate(zip(coeffs, p)) if i != k), mpq(0)) / p[k]
        if coeffs[k] or forced_zero:
            return LinearForm(tuple(coeffs)).normalized()
    raise ConstraintError(f"could not satisfy constraint {constraint} with nonzero coefficients")


def random_invertible_matrix(n: int, seed: int, spread: int = 3) -> CoordinateChange:
    """Small-entry random invertible integer matrix (for invariance tests)."""
    rng = random.Random(seed)
    while True:
        rows = tuple(tuple(rng.randint(-spread, spread) for _ in range(n)) for _ in range(n))
        if determinant(rows):
            return CoordinateChange(rows)


def projective_normalize(point: Iterable) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    pt = [mpq(x) for x in point]
    lead = next((x for x in pt if x), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    return tuple(x / lead for x in pt)
