"""Expression parser for ring elements and polynomial maps.

Grammar: integer literals, identifiers, ``+ - * / ^`` (``**`` also accepted)
and parentheses.  Division is only allowed by invertible elements.
"""

from __future__ import annotations

import re
from typing import Sequence

from .poly import Poly, PolyMap
from .rings import Elem, NotInvertible, PolynomialRing, Ring, _split_top


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^(),]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> Elem:
        value = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                inv = self.ring.inv(rhs.value)
                if inv is NotInvertible:
                    self.error("division by a non-invertible element", tok)
                value = value * Elem(self.ring, inv)
        return value

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.error("exponent must be a non-negative integer literal", tok)
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return Elem(self.ring, self.ring.from_int(int(val)))
        if kind == "name":
            g = self.ring.generator(val)
            if g is None:
                self.error(f"unknown variable {val!r}", tok)
            return Elem(self.ring, g)
        if tok[:2] == ("op", "("):
            value = self.expr()
            if self.take()[:2] != ("op", ")"):
                self.error("expected ')'", self.tokens[self.i - 1])
            return value
        self.error("unexpected token", tok)


def parse_expression(text: str, ring: Ring) -> Elem:
    return _Parser(text, ring).parse()


def _natural_key(name: str):
    return [int(s) if s.isdigit() else s for s in re.split(r"(\d+)", name)]


def expression_names(text: str) -> list[str]:
    return [v for k, v, _ in tokenize(text) if k == "name"]


def split_components(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        inner = text[1:-1]
        parts = _split_top(inner)
        # only strip the parentheses if they enclose the whole text
        depth = 0
        whole = True
        for ch in inner:
            depth += ch == "("
            depth -= ch == ")"
            if depth < 0:
                whole = False
                break
        if whole and len(parts) > 1:
            return parts
    return _split_top(text)


def parse_poly(text: str, ring: Ring, variables: Sequence[str]) -> Poly:
    variables = tuple(variables)
    prng = PolynomialRing(ring, variables)
    return parse_expression(text, prng).value


def parse_map(text: str, ring: Ring, variables: Sequence[str] | None = None) -> PolyMap:
    """Parse ``"(x0^2 + x1, x0*x1)"`` (or a single expression) into a map.

    Without ``variables`` the domain is every identifier that is not a
    generator of ``ring``, in natural sort order.
    """
    parts = split_components(text)
    if variables is None:
        names = set()
        for p in parts:
            names.update(n for n in expression_names(p) if ring.generator(n) is None)
        variables = sorted(names, key=_natural_key)
        if not variables:
            variables = ["x"]
    variables = tuple(variables)
    return PolyMap(ring, variables, tuple(parse_poly(p, ring, variables) for p in parts))
