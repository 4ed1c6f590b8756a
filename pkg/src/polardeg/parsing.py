"""Recursive-descent parser for polynomial expressions and input files.

Grammar::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (('*'|'/')? factor)*      # juxtaposition multiplies
    factor  := unary ('^' INT | '**' INT)?
    unary   := '-' unary | primary
    primary := NUMBER | NAME | '(' expr ')'

Division is allowed only by nonzero constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from polardeg.ideals import squarefree_part
from polardeg.poly import LinearForm, Polynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<pow>\*\*)|(?P<op>[-+*/^()])"
)


@dataclass
class _Token:
    kind: str
    text: str
    column: int


def _tokenize(text: str, line: int, col0: int) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            if kind == "pow":
                kind, val = "op", "^"
            else:
                val = m.group()
            tokens.append(_Token(kind, val, col0 + pos))
        pos = m.end()
    tokens.append(_Token("end", "", col0 + len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: tuple | None, line: int, col0: int):
        self.tokens = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.fixed_ring = ring is not None
        self.names: list[str] = list(ring) if ring else []
        self.text = text

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok.column)

    # The tree is built as nested tuples first; the ring is only known once
    # every name has been seen.
    def expr(self):
        tok = self.peek()
        sign = 1
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            sign = -1 if tok.text == "-" else 1
        node = self.term()
        if sign < 0:
            node = ("neg", node)
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.take()
                rhs = self.factor()
                node = ("mul" if tok.text == "*" else "div", node, rhs, tok)
            elif tok.kind in ("num", "name") or (tok.kind == "op" and tok.text == "("):
                rhs = self.factor()
                node = ("mul", node, rhs, tok)
            else:
                return node

    def factor(self):
        node = self.unary()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            exp = self.take()
            if exp.kind != "num" or not exp.text.isdigit():
                self.error("exponent must be a non-negative integer", exp)
            node = ("pow", node, int(exp.text))
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.take()
            return ("neg", self.unary())
        if tok.kind == "op" and tok.text == "+":
            self.take()
            return self.unary()
        return self.primary()

    def primary(self):
        tok = self.take()
        if tok.kind == "num":
            return ("const", mpq(tok.text))
        if tok.kind == "name":
            if tok.text not in self.names:
                if self.fixed_ring:
                    self.error(f"unknown variable {tok.text!r}", tok)
                self.names.append(tok.text)
            return ("var", tok.text)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            close = self.take()
            if close.kind != "op" or close.text != ")":
                self.error("expected ')'", close)
            return node
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {tok.text!r}", tok)

    def parse(self) -> Polynomial:
        if self.peek().kind == "end":
            self.error("empty expression")
        tree = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected token {tok.text!r}", tok)
        ring = tuple(self.names)
        return self.build(tree, ring)

    def build(self, node, ring) -> Polynomial:
        kind = node[0]
        if kind == "const":
            return Polynomial.constant(ring, node[1])
        if kind == "var":
            return Polynomial.variable(ring, node[1])
        if kind == "neg":
            return -self.build(node[1], ring)
        if kind == "pow":
            return self.build(node[1], ring) ** node[2]
        a = self.build(node[1], ring)
        b = self.build(node[2], ring)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if kind == "div":
            if not b.is_constant() or b.is_zero():
                raise ParseError("division only by a nonzero constant", self.line, node[3].column)
            return a.scale(1 / b.constant_coefficient())
        raise AssertionError(kind)


def parse_polynomial(text: str, ring: Sequence[str] | None = None, line: int = 1, column: int = 1) -> Polynomial:
    """Parse ``text``.  Without ``ring`` the variables are taken in order of appearance."""
    return _Parser(text, tuple(ring) if ring is not None else None, line, column).parse()


def parse_linear_form(text: str, ring: Sequence[str]) -> LinearForm:
    """Parse a hyperplane such as ``w - x - y`` or ``w - x - y = 0``."""
    body = text.split("=")
    if len(body) > 2:
        raise ParseError("too many '=' signs")
    p = parse_polynomial(body[0], ring)
    if len(body) == 2:
        p = p - parse_polynomial(body[1], ring)
    try:
        return LinearForm.from_polynomial(p)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


@dataclass
class HypersurfaceInput:
    ring: tuple
    polynomial: Polynomial
    hyperplane: LinearForm | None = None
    original: Polynomial | None = None

    @property
    def reduced(self) -> bool:
        """True when ``f`` had repeated factors and was replaced by its squarefree part."""
        return self.original is not None


def parse_input(text: str) -> HypersurfaceInput:
    """Parse a ``vars:`` / ``f:`` (optional ``hyperplane:``) input file."""
    ring = None
    f_src = None
    h_src = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        if not stripped.strip():
            continue
        if ":" not in stripped:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, value = stripped.split(":", 1)
        key = key.strip().lower()
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        if key == "vars":
            names = [v for v in re.split(r"[\s,]+", value.strip()) if v]
            if not names:
                raise ParseError("empty variable list", lineno, col)
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                    raise ParseError(f"bad variable name {n!r}", lineno, col)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable name", lineno, col)
            ring = tuple(names)
        elif key == "f":
            f_src = (value, lineno, col)
        elif key == "hyperplane":
            h_src = (value, lineno, col)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if f_src is None:
        raise ParseError("missing 'f:' line", 1, 1)
    f = parse_polynomial(f_src[0], ring, f_src[1], f_src[2])
    if not f.is_homogeneous():
        raise ParseError("polynomial is not homogeneous", f_src[1], f_src[2])
    original = None
    reduced = squarefree_part(f)
    if reduced.degree() < f.degree():
        original, f = f, reduced
    if f.degree() < 2:
        raise ParseError("reduced polynomial must have degree at least 2", f_src[1], f_src[2])
    h = None
    if h_src is not None:
        h = parse_linear_form(h_src[0], f.ring)
        if h.is_zero():
            raise ParseError("hyperplane form is zero", h_src[1], h_src[2])
    return HypersurfaceInput(f.ring, f, h, original)
