"""Exact commutative unital rings.

A ring object doubles as its own descriptor: ``Rationals()``, ``IntegersMod(n)``,
``PolynomialRing(base, names)`` and ``StructureConstantAlgebra(base, rank, table)``
are frozen dataclasses, so two equal descriptors are interchangeable.

Rings operate on raw payloads (``Fraction``, ``int``, :class:`~slopecalc.poly.Poly`,
coordinate tuples); :class:`Elem` wraps a payload together with its owner for
user-facing arithmetic.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Iterable, Sequence


class RingError(ValueError):
    """Invalid ring descriptor or malformed element text."""


class RingMismatch(TypeError):
    """Operands belong to different rings."""


class _Sentinel:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return self.name


#: Returned by :func:`invert` when no inverse exists.
NotInvertible = _Sentinel("NotInvertible")


class Ring:
    """Interface shared by every concrete ring.

    Subclasses implement the payload-level primitives; everything else is
    derived here.
    """

    zero: Any
    one: Any

    # payload primitives -------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a):
        """Inverse payload of ``a`` or :data:`NotInvertible`."""
        raise NotImplementedError

    def is_nilpotent(self, a) -> bool:
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def fmt(self, a) -> str:
        """Canonical standalone text of an element."""
        raise NotImplementedError

    def fmt_coeff(self, a) -> str:
        """Text of an element used as a polynomial coefficient."""
        return self.fmt(a)

    def random(self, rng: random.Random, size: int = 5):
        raise NotImplementedError

    def generator(self, name: str):
        """Payload of the named generator, or ``None`` if unknown here."""
        return None

    def generator_names(self) -> tuple[str, ...]:
        return ()

    def is_finite(self) -> bool:
        return False

    def elements(self) -> Iterable:
        raise RingError(f"{self} is not finite")

    # wrapped interface -------------------------------------------------
    def __call__(self, value) -> "Elem":
        if isinstance(value, Elem):
            if value.ring != self:
                return Elem(self, self.coerce(value.ring, value.value))
            return value
        if isinstance(value, str):
            return self.parse(value)
        return Elem(self, self.convert(value))

    def convert(self, value):
        """Turn a Python number into a payload of this ring."""
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, Fraction):
            num = self.from_int(value.numerator)
            den = self.inv(self.from_int(value.denominator))
            if den is NotInvertible:
                raise RingError(f"{value} does not exist in {self}")
            return self.mul(num, den)
        if self.contains(value):
            return value
        raise RingMismatch(f"cannot convert {value!r} into {self}")

    def coerce(self, source: "Ring", value):
        """Map a payload from a subring into this ring."""
        if source == self:
            return value
        raise RingMismatch(f"no embedding {source} -> {self}")

    def parse(self, text: str) -> "Elem":
        from .expr import parse_expression

        return parse_expression(text, self)

    def elem(self, value) -> "Elem":
        return Elem(self, value)

    @property
    def zero_elem(self) -> "Elem":
        return Elem(self, self.zero)

    @property
    def one_elem(self) -> "Elem":
        return Elem(self, self.one)


class Elem:
    """A ring element that remembers its ring."""

    __slots__ = ("ring", "value")

    def __init__(self, ring: Ring, value):
        self.ring = ring
        self.value = value

    def _other(self, other):
        if isinstance(other, Elem):
            if other.ring is self.ring or other.ring == self.ring:
                return other.value
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if isinstance(other, (int, Fraction)):
            return self.ring.convert(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Elem(self.ring, self.ring.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Elem(self.ring, self.ring.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Elem(self.ring, self.ring.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Elem(self.ring, self.ring.mul(self.value, o))

    __rmul__ = __mul__

    def __neg__(self):
        return Elem(self.ring, self.ring.neg(self.value))

    def __pow__(self, e: int):
        return Elem(self.ring, self.ring.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, Elem):
            return self.ring == other.ring and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.ring.convert(other)
            except RingError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __repr__(self):
        return f"Elem({self.ring}, {self.ring.fmt(self.value)})"

    def __str__(self):
        return self.ring.fmt(self.value)


def invert(a: Elem):
    """Inverse of ``a`` as an :class:`Elem`, or :data:`NotInvertible`."""
    inv = a.ring.inv(a.value)
    if inv is NotInvertible:
        return NotInvertible
    return Elem(a.ring, inv)


# ---------------------------------------------------------------------------
# concrete rings


@dataclass(frozen=True)
class Rationals(Ring):
    def __post_init__(self):
        object.__setattr__(self, "zero", Fraction(0))
        object.__setattr__(self, "one", Fraction(1))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return Fraction(n)

    def is_zero(self, a):
        return not a

    def inv(self, a):
        if not a:
            return NotInvertible
        return 1 / a

    def is_nilpotent(self, a):
        return not a

    def contains(self, a):
        return isinstance(a, Fraction)

    def convert(self, value):
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return Fraction(value)
        return super().convert(value)

    def fmt(self, a):
        return str(a)

    def random(self, rng, size=5):
        den = rng.randint(1, size)
        return Fraction(rng.randint(-size * den, size * den), den)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class IntegersMod(Ring):
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise RingError(f"IntegersMod needs n >= 2, got {self.n!r}")
        object.__setattr__(self, "zero", 0)
        object.__setattr__(self, "one", 1)

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def pow(self, a, e):
        return pow(a, e, self.n)

    def from_int(self, n):
        return n % self.n

    def is_zero(self, a):
        return not a

    def inv(self, a):
        if gcd(a, self.n) != 1:
            return NotInvertible
        return pow(a, -1, self.n)

    def is_nilpotent(self, a):
        # a^e = 0 for some e iff every prime of n divides a; e = bit length suffices
        return pow(a, self.n.bit_length(), self.n) == 0

    def contains(self, a):
        return isinstance(a, int) and 0 <= a < self.n

    def fmt(self, a):
        return f"{a} mod {self.n}"

    def fmt_coeff(self, a):
        return str(a)

    def random(self, rng, size=5):
        return rng.randrange(self.n)

    def is_finite(self):
        return True

    def elements(self):
        return range(self.n)

    def parse(self, text):
        m = re.fullmatch(r"\s*(-?\d+)\s*mod\s*(\d+)\s*", text)
        if m:
            if int(m.group(2)) != self.n:
                raise RingError(f"modulus {m.group(2)} does not match {self}")
            return Elem(self, int(m.group(1)) % self.n)
        return super().parse(text)

    def __str__(self):
        return f"Z/{self.n}"


@dataclass(frozen=True)
class PolynomialRing(Ring):
    base: Ring
    variables: tuple[str, ...]

    def __post_init__(self):
        from .poly import Poly

        names = tuple(self.variables)
        object.__setattr__(self, "variables", names)
        if not names:
            raise RingError("PolynomialRing needs at least one variable")
        for v in names:
            if not isinstance(v, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise RingError(f"bad variable name {v!r}")
        if len(set(names)) != len(names):
            raise RingError(f"duplicate variable names in {names}")
        clash = set(names) & set(_all_generator_names(self.base))
        if clash:
            raise RingError(f"variables {sorted(clash)} already used by {self.base}")
        object.__setattr__(self, "zero", Poly.const(self.base, names, self.base.zero))
        object.__setattr__(self, "one", Poly.const(self.base, names, self.base.one))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a**e

    def from_int(self, n):
        from .poly import Poly

        return Poly.const(self.base, self.variables, self.base.from_int(n))

    def is_zero(self, a):
        return not a.terms

    def contains(self, a):
        from .poly import Poly

        return isinstance(a, Poly) and a.ring == self.base and a.gens == self.variables

    def convert(self, value):
        from .poly import Poly

        if isinstance(value, Poly):
            if value.ring != self.base:
                raise RingMismatch(f"{value.ring} vs {self.base}")
            return value.with_gens(self.variables)
        try:
            c = self.base.convert(value)
        except RingMismatch:
            raise RingMismatch(f"cannot convert {value!r} into {self}") from None
        return Poly.const(self.base, self.variables, c)

    def coerce(self, source, value):
        from .poly import Poly

        if source == self:
            return value
        if source == self.base:
            return Poly.const(self.base, self.variables, value)
        return Poly.const(self.base, self.variables, self.base.coerce(source, value))

    def is_nilpotent(self, a):
        return all(self.base.is_nilpotent(c) for c in a.terms.values())

    def inv(self, a):
        # unit iff constant term is a unit and the rest is nilpotent
        zero_exp = (0,) * len(self.variables)
        c0 = a.terms.get(zero_exp, self.base.zero)
        u = self.base.inv(c0)
        if u is NotInvertible:
            return NotInvertible
        from .poly import Poly

        rest = a - Poly.const(self.base, self.variables, c0)
        if not self.is_nilpotent(rest):
            return NotInvertible
        # a = c0 (1 + n), n nilpotent: a^-1 = c0^-1 * sum (-n)^i
        n = rest.scale(u)
        term = self.one
        total = self.one
        while True:
            term = -(term * n)
            if not term.terms:
                break
            total = total + term
        return total.scale(u)

    def fmt(self, a):
        return a.format()

    def fmt_coeff(self, a):
        text = a.format()
        if len(a.terms) > 1 or any(any(e) for e in a.terms):
            return f"({text})"
        return text

    def random(self, rng, size=5):
        from .poly import random_poly

        return random_poly(rng, self.base, self.variables, degree=2, nterms=3, size=size)

    def generator(self, name):
        from .poly import Poly

        if name in self.variables:
            return Poly.var(self.base, self.variables, name)
        inner = self.base.generator(name)
        if inner is not None:
            return Poly.const(self.base, self.variables, inner)
        return None

    def generator_names(self):
        return self.variables

    def __str__(self):
        return f"{self.base}[{','.join(self.variables)}]"


def _all_generator_names(ring: Ring) -> tuple[str, ...]:
    names: list[str] = []
    while ring is not None:
        names.extend(ring.generator_names())
        ring = getattr(ring, "base", None)
    return tuple(names)


@dataclass(frozen=True)
class StructureConstantAlgebra(Ring):
    """Free module of finite rank with multiplication ``e_a e_b = sum_c table[a][b][c] e_c``.

    Basis element 0 must be the unit.
    """

    base: Ring
    rank: int
    constants: tuple = field(repr=False)

    def __post_init__(self):
        r = self.rank
        table = tuple(tuple(tuple(row) for row in plane) for plane in self.constants)
        object.__setattr__(self, "constants", table)
        if r < 1 or len(table) != r or any(len(p) != r for p in table):
            raise RingError("structure constant table must be rank x rank x rank")
        if any(len(row) != r for p in table for row in p):
            raise RingError("structure constant table must be rank x rank x rank")
        b = self.base
        for beta in range(r):
            for gamma in range(r):
                want = b.one if beta == gamma else b.zero
                if table[0][beta][gamma] != want or table[beta][0][gamma] != want:
                    raise RingError("basis element 0 is not a unit")
        object.__setattr__(self, "zero", (b.zero,) * r)
        object.__setattr__(self, "one", (b.one,) + (b.zero,) * (r - 1))
        # sparse view for multiplication
        sparse = []
        for a in range(r):
            for c in range(r):
                entries = tuple((g, v) for g, v in enumerate(table[a][c]) if not b.is_zero(v))
                if entries:
                    sparse.append((a, c, entries))
        object.__setattr__(self, "_sparse", tuple(sparse))

    def add(self, a, b):
        add = self.base.add
        return tuple(add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        base = self.base
        out = list(self.zero)
        for i, j, entries in self._sparse:
            x, y = a[i], b[j]
            if base.is_zero(x) or base.is_zero(y):
                continue
            xy = base.mul(x, y)
            for g, c in entries:
                out[g] = base.add(out[g], base.mul(xy, c))
        return tuple(out)

    def from_int(self, n):
        return (self.base.from_int(n),) + (self.base.zero,) * (self.rank - 1)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def contains(self, a):
        return isinstance(a, tuple) and len(a) == self.rank and all(self.base.contains(x) for x in a)

    def coerce(self, source, value):
        if source == self:
            return value
        return (self.base.coerce(source, value),) + (self.base.zero,) * (self.rank - 1)

    def convert(self, value):
        if isinstance(value, (tuple, list)) and len(value) == self.rank:
            return tuple(self.base.convert(v) if not self.base.contains(v) else v for v in value)
        return (self.base.convert(value),) + (self.base.zero,) * (self.rank - 1)

    def left_matrix(self, a) -> list[list]:
        """Matrix of ``x -> a*x`` acting on coordinate columns."""
        cols = [self.mul(a, self.basis_vector(j)) for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def basis_vector(self, i):
        b = self.base
        return tuple(b.one if j == i else b.zero for j in range(self.rank))

    def inv(self, a):
        mat = self.left_matrix(a)
        inv = matrix_inverse(self.base, mat)
        if inv is NotInvertible:
            return NotInvertible
        # first column of the inverse matrix solves a*x = 1
        return tuple(inv[i][0] for i in range(self.rank))

    def is_nilpotent(self, a):
        x = a
        for _ in range(self.rank + 1):
            if self.is_zero(x):
                return True
            x = self.mul(x, a)
        # over a base with nilpotents more powers may be needed
        for _ in range(64):
            if self.is_zero(x):
                return True
            x = self.mul(x, x)
        return False

    def fmt(self, a):
        return "[" + ", ".join(self.base.fmt_coeff(x) for x in a) + "]"

    fmt_coeff = fmt

    def parse(self, text):
        text = text.strip()
        if text.startswith("[") and text.endswith("]"):
            parts = _split_top(text[1:-1])
            if len(parts) != self.rank:
                raise RingError(f"expected {self.rank} coordinates")
            return Elem(self, tuple(self.base.parse(p).value for p in parts))
        return super().parse(text)

    def random(self, rng, size=5):
        return tuple(self.base.random(rng, size) for _ in range(self.rank))

    def is_finite(self):
        return self.base.is_finite()

    def generator(self, name):
        inner = self.base.generator(name)
        if inner is not None:
            return (inner,) + (self.base.zero,) * (self.rank - 1)
        return None

    def __str__(self):
        return f"Alg({self.base}, rank {self.rank})"


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


# ---------------------------------------------------------------------------
# linear algebra over an arbitrary commutative ring


def determinant(ring: Ring, mat: Sequence[Sequence]) -> Any:
    """Determinant by Laplace expansion with memoised column subsets.

    Uses no division, so it is valid over any commutative ring.
    """
    n = len(mat)
    if n == 0:
        return ring.one
    # minors[mask] = det of rows (n - popcount(mask))..n-1 restricted to columns in mask
    minors = {0: ring.one}
    for row in range(n - 1, -1, -1):
        size = n - row
        nxt = {}
        for mask in _masks_of_size(n, size):
            acc = ring.zero
            sign_pos = 0
            for col in range(n):
                if not mask >> col & 1:
                    continue
                entry = mat[row][col]
                if not ring.is_zero(entry):
                    term = ring.mul(entry, minors[mask & ~(1 << col)])
                    acc = ring.add(acc, term) if sign_pos % 2 == 0 else ring.sub(acc, term)
                sign_pos += 1
            nxt[mask] = acc
        minors = nxt
    return minors[(1 << n) - 1]


@lru_cache(maxsize=None)
def _masks_of_size(n: int, size: int) -> tuple[int, ...]:
    return tuple(m for m in range(1 << n) if bin(m).count("1") == size)


def matrix_inverse(ring: Ring, mat: Sequence[Sequence]):
    """Inverse via the adjugate; :data:`NotInvertible` when det is not a unit."""
    n = len(mat)
    det = determinant(ring, mat)
    dinv = ring.inv(det)
    if dinv is NotInvertible:
        return NotInvertible
    out = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[mat[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = determinant(ring, minor)
            if (i + j) % 2:
                cof = ring.neg(cof)
            out[j][i] = ring.mul(cof, dinv)
    return out


# ---------------------------------------------------------------------------
# descriptor parsing


def make_ring(descriptor) -> Ring:
    """Validate a descriptor (or parse descriptor text) and return the ring."""
    if isinstance(descriptor, str):
        return parse_ring(descriptor)
    if not isinstance(descriptor, Ring):
        raise RingError(f"not a ring descriptor: {descriptor!r}")
    return descriptor


_RING_HEAD = re.compile(r"\s*(Q|Z/(\d+))\s*")


def parse_ring(text: str) -> Ring:
    """Parse ``Q``, ``Z/7``, ``Q[t01,t10,t11]``, ``Z/5[a][b,c]`` ..."""
    m = _RING_HEAD.match(text)
    if not m:
        raise RingError(f"cannot parse ring {text!r} at position 0")
    ring: Ring = Rationals() if m.group(1) == "Q" else IntegersMod(int(m.group(2)))
    pos = m.end()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] != "[":
            raise RingError(f"cannot parse ring {text!r} at position {pos}")
        end = text.find("]", pos)
        if end < 0:
            raise RingError(f"unclosed '[' in ring {text!r} at position {pos}")
        names = [s.strip() for s in text[pos + 1 : end].split(",")]
        ring = PolynomialRing(ring, tuple(names))
        pos = end + 1
    return ring
