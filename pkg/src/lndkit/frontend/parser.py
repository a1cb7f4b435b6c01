"""Recursive-descent parser for ring elements and derivations.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "d/d" NAME | "(" expr ")"

An expression containing ``d/dNAME`` operators evaluates to a derivation;
it must be linear in them (``element * d/dx`` sums).  Division is only by
nonzero rational constants, which covers literals such as ``3/2``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..derivation import Derivation
from ..errors import ParseError
from ..poly import Poly

_TOKEN = re.compile(
    r"\s*(?:(?P<dop>d/d(?P<dvar>[A-Za-z_][A-Za-z0-9_]*))|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def tokenize(src):
    pos = 0
    tokens = []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        start = m.start(m.lastgroup if m.lastgroup != "dvar" else "dop")
        if m.group("dop"):
            tokens.append(("dop", m.group("dvar"), start))
        elif m.group("num"):
            tokens.append(("num", int(m.group("num")), start))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class _Vector:
    """Generator images of a derivation under construction."""

    __slots__ = ("images",)

    def __init__(self, images):
        self.images = images


class _Parser:
    def __init__(self, src, variables):
        self.src = src
        self.variables = tuple(variables)
        self.n = len(self.variables)
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self):
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = self.combine(value, rhs, val, pos)
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                value = self.mul(value, rhs, pos) if val == "*" else self.div(value, rhs, pos)
            else:
                return value

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else self.neg(inner)
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k_kind, k, k_pos = self.take()
            if k_kind != "num":
                raise ParseError("exponent must be a non-negative integer", k_pos)
            if isinstance(base, _Vector):
                raise ParseError("cannot raise a derivation to a power", pos)
            return base ** k
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Poly.const(self.n, val)
        if kind == "name":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}", pos)
            return Poly.var(self.n, self.variables.index(val))
        if kind == "dop":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r} in d/d{val}", pos)
            images = [Poly.const(self.n, 0)] * self.n
            images[self.variables.index(val)] = Poly.const(self.n, 1)
            return _Vector(images)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)

    # -- mixed arithmetic ----------------------------------------------------

    def combine(self, a, b, op, pos):
        if isinstance(a, _Vector) != isinstance(b, _Vector):
            a, b = self._zero_promote(a, b, pos)
        if isinstance(a, _Vector):
            f = (lambda x, y: x + y) if op == "+" else (lambda x, y: x - y)
            return _Vector([f(x, y) for x, y in zip(a.images, b.images)])
        return a + b if op == "+" else a - b

    def _zero_promote(self, a, b, pos):
        # a literal 0 may stand for the zero derivation
        if not isinstance(a, _Vector) and a.is_zero():
            return _Vector([Poly.const(self.n, 0)] * self.n), b
        if not isinstance(b, _Vector) and b.is_zero():
            return a, _Vector([Poly.const(self.n, 0)] * self.n)
        raise ParseError("cannot add an element and a derivation", pos)

    def mul(self, a, b, pos):
        if isinstance(a, _Vector) and isinstance(b, _Vector):
            raise ParseError("product of two derivations is not a derivation", pos)
        if isinstance(a, _Vector):
            return _Vector([x * b for x in a.images])
        if isinstance(b, _Vector):
            return _Vector([a * x for x in b.images])
        return a * b

    def div(self, a, b, pos):
        if isinstance(b, _Vector) or not b.is_constant() or b.is_zero():
            raise ParseError("division is only by nonzero rational constants", pos)
        c = b.constant_value()
        if isinstance(a, _Vector):
            return _Vector([x / c for x in a.images])
        return a / c

    def neg(self, a):
        if isinstance(a, _Vector):
            return _Vector([-x for x in a.images])
        return -a


def parse_poly(src, variables):
    value = _Parser(src, variables).parse()
    if isinstance(value, _Vector):
        raise ParseError("expected a ring element, found a derivation", 0)
    return value


def parse_element(src, R):
    """Parse ``src`` into the ring ``R`` (normalized)."""
    return R.element(parse_poly(src, R.variables))


def parse_derivation(src, R, check=True):
    """Parse a sum of ``element * d/dvar`` terms; checks well-definedness on ``R``."""
    value = _Parser(src, R.variables).parse()
    if not isinstance(value, _Vector):
        if value.is_zero():
            return Derivation.zero(R)
        raise ParseError("expected a derivation (terms like c*d/dx)", 0)
    return Derivation(R, [R.element(p) for p in value.images], check=check)


def parse_rational(src):
    try:
        return Fraction(src.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {src!r}", 0) from None
