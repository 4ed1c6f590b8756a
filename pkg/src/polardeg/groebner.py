"""Buchberger's algorithm over the rationals.

Polynomials inside the kernel are plain ``dict`` objects mapping exponent
tuples to ``mpq``.  Pair management follows Gebauer and Moeller (coprime
leading monomials and the chain criterion), pairs are picked by the normal
strategy, and reduction keeps the pending terms in a heap ordered by the
monomial order.  The returned basis is reduced, so it is unique.

Every elementary reduction step is charged to a step budget held in a
context variable; exceeding it raises :class:`ResourceBudgetExceeded`.
"""

from __future__ import annotations

import heapq
import os
from contextlib import contextmanager
from contextvars import ContextVar
from operator import add, le, sub
from typing import Iterable, Sequence

from gmpy2 import mpq

DEFAULT_STEP_BUDGET = 10_000_000
BUDGET_ENV = "POLARDEG_STEP_BUDGET"


class ResourceBudgetExceeded(RuntimeError):
    """Raised when a computation runs past its reduction-step budget."""


class StepBudget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, steps: int = 1) -> None:
        self.used += steps
        if self.used > self.limit:
            raise ResourceBudgetExceeded(f"reduction step budget of {self.limit} exhausted")


def configured_limit() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_STEP_BUDGET


_active_budget: ContextVar[StepBudget | None] = ContextVar("polardeg_step_budget", default=None)


@contextmanager
def step_budget(limit: int | None = None):
    """Share one budget across every Groebner computation in the block."""
    budget = StepBudget(configured_limit() if limit is None else limit)
    token = _active_budget.set(budget)
    try:
        yield budget
    finally:
        _active_budget.reset(token)


def _current_budget() -> StepBudget:
    budget = _active_budget.get()
    return budget if budget is not None else StepBudget(configured_limit())


# monomial orders -------------------------------------------------------------


class MonomialOrder:
    """A monomial order given by a sort key: smaller key means larger monomial.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``; a block order compares
    the first ``block`` variables by grevlex and breaks ties with grevlex on
    the rest, which makes it an elimination order for those first variables.
    """

    def __init__(self, kind: str, nvars: int, block: int = 0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown order {kind!r}")
        if kind == "block" and not 0 < block < nvars:
            raise ValueError("block size must split the variables")
        self.kind = kind
        self.nvars = nvars
        self.block = block
        self._cache: dict = {}

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialOrder) and (self.kind, self.nvars, self.block) == (
            other.kind,
            other.nvars,
            other.block,
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.nvars, self.block))

    def __repr__(self) -> str:
        return f"MonomialOrder({self.kind!r}, {self.nvars}, {self.block})"

    def key(self, exp: tuple) -> tuple:
        k = self._cache.get(exp)
        if k is None:
            if self.kind == "grevlex":
                k = (-sum(exp),) + exp[::-1]
            elif self.kind == "lex":
                k = tuple(-e for e in exp)
            else:
                a, b = exp[: self.block], exp[self.block :]
                k = (-sum(a),) + a[::-1] + (-sum(b),) + b[::-1]
            self._cache[exp] = k
        return k


def make_order(order: str | MonomialOrder, nvars: int) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    if order.startswith("block"):
        return MonomialOrder("block", nvars, int(order[5:].strip(":")))
    return MonomialOrder(order, nvars)


# kernel helpers ----------------------------------------------------------------


def leading_monomial(p: dict, order: MonomialOrder) -> tuple:
    return min(p, key=order.key)


def _divides(a: tuple, b: tuple) -> bool:
    return all(map(le, a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(map(max, a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return not any(x and y for x, y in zip(a, b))


class _Divisor:
    __slots__ = ("lm", "tail", "deg")

    def __init__(self, lm: tuple, poly: dict):
        self.lm = lm
        self.deg = sum(lm)
        self.tail = [(e, c) for e, c in poly.items() if e != lm]


def reduce_full(p: dict, divisors: Sequence[_Divisor], order: MonomialOrder, budget: StepBudget) -> dict:
    """Fully reduce ``p`` by monic divisors; returns the remainder."""
    if not p:
        return {}
    key = order.key
    h = dict(p)
    heap = [(key(e), e) for e in h]
    heapq.heapify(heap)
    rem = {}
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        _, m = pop(heap)
        c = h.pop(m, None)
        if c is None:
            continue
        dm = sum(m)
        for d in divisors:
            if d.deg <= dm and _divides(d.lm, m):
                budget.charge()
                q = tuple(map(sub, m, d.lm))
                for e, a in d.tail:
                    ne = tuple(map(add, q, e))
                    old = h.get(ne)
                    if old is None:
                        h[ne] = -c * a
                        push(heap, (key(ne), ne))
                    else:
                        v = old - c * a
                        if v:
                            h[ne] = v
                        else:
                            del h[ne]
                break
        else:
            rem[m] = c
    return rem


def _monic(p: dict, lm: tuple) -> dict:
    inv = 1 / p[lm]
    return {e: c * inv for e, c in p.items()}


def _spoly(f: dict, lf: tuple, g: dict, lg: tuple) -> dict:
    lcm = _lcm(lf, lg)
    qf = tuple(map(sub, lcm, lf))
    qg = tuple(map(sub, lcm, lg))
    out = {}
    for e, c in f.items():
        out[tuple(map(add, qf, e))] = c
    for e, c in g.items():
        ne = tuple(map(add, qg, e))
        v = out.get(ne)
        if v is None:
            out[ne] = -c
        else:
            v -= c
            if v:
                out[ne] = v
            else:
                del out[ne]
    out.pop(lcm, None)
    return out


def buchberger(polys: Iterable[dict], order: MonomialOrder) -> list[dict]:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial)."""
    budget = _current_budget()
    key = order.key
    inputs = [dict(p) for p in polys if p]
    if not inputs:
        return []
    basis: list[dict] = []
    lms: list[tuple] = []
    active: list[int] = []
    pairs: list[tuple[int, int, tuple]] = []

    def divisors():
        return [_Divisor(lms[i], basis[i]) for i in active]

    def update(h: int) -> None:
        nonlocal pairs, active
        lh = lms[h]
        cands = [(i, _lcm(lms[i], lh)) for i in active]
        kept = []
        for idx, (i, lc) in enumerate(cands):
            if _coprime(lms[i], lh):
                kept.append((i, lc, True))
                continue
            redundant = False
            for j, lc2 in cands[idx + 1 :]:
                if _divides(lc2, lc):
                    redundant = True
                    break
            if not redundant:
                for j, lc2, _ in kept:
                    if _divides(lc2, lc):
                        redundant = True
                        break
            if not redundant:
                kept.append((i, lc, False))
        new_pairs = [(i, h, lc) for i, lc, coprime in kept if not coprime]
        old = []
        for i, j, lc in pairs:
            if (
                _divides(lh, lc)
                and _lcm(lms[i], lh) != lc
                and _lcm(lms[j], lh) != lc
            ):
                continue
            old.append((i, j, lc))
        pairs = old + new_pairs
        active = [i for i in active if not _divides(lh, lms[i])] + [h]

    def add_poly(p: dict) -> None:
        lm = leading_monomial(p, order)
        basis.append(_monic(p, lm))
        lms.append(lm)
        update(len(basis) - 1)

    inputs.sort(key=lambda p: key(leading_monomial(p, order)), reverse=True)
    for p in inputs:
        r = reduce_full(p, divisors(), order, budget)
        if r:
            add_poly(r)
            if not any(lms[active[-1]]):
                return [{(0,) * order.nvars: mpq(1)}]

    while pairs:
        # normal strategy: smallest lcm first (largest key)
        best = max(range(len(pairs)), key=lambda t: key(pairs[t][2]))
        i, j, _ = pairs.pop(best)
        s = _spoly(basis[i], lms[i], basis[j], lms[j])
        budget.charge()
        r = reduce_full(s, divisors(), order, budget)
        if r:
            add_poly(r)
            if not any(lms[active[-1]]):
                return [{(0,) * order.nvars: mpq(1)}]

    # active leading monomials are already minimal; reduce the tails
    final = sorted(active, key=lambda i: key(lms[i]))
    result = []
    for idx in final:
        others = [_Divisor(lms[j], basis[j]) for j in final if j != idx]
        tail = {e: c for e, c in basis[idx].items() if e != lms[idx]}
        red = reduce_full(tail, others, order, budget)
        red[lms[idx]] = mpq(1)
        result.append(red)
    return result


def normal_form(p: dict, basis: Sequence[dict], order: MonomialOrder) -> dict:
    divs = [_Divisor(leading_monomial(g, order), _monic(g, leading_monomial(g, order))) for g in basis]
    return reduce_full(p, divs, order, _current_budget())


def spolys_reduce_to_zero(basis: Sequence[dict], order: MonomialOrder) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    lms = [leading_monomial(g, order) for g in basis]
    monic = [_monic(g, lm) for g, lm in zip(basis, lms)]
    divs = [_Divisor(lm, g) for lm, g in zip(lms, monic)]
    budget = _current_budget()
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            s = _spoly(monic[i], lms[i], monic[j], lms[j])
            if reduce_full(s, divs, order, budget):
                return False
    return True
