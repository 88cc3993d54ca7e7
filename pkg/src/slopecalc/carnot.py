"""Graded nilpotent Lie algebras with the BCH group law, dilations and the
first-order Pansu difference quotient.

Vectors are tuples of base-ring payloads in the basis ``e_0 .. e_{N-1}``;
basis vectors are listed grade by grade.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .diffquot import NonInvertibleTime
from .poly import PolyMap
from .rings import Elem, NotInvertible, Ring, RingError, make_ring


class UnsupportedClass(ValueError):
    pass


class CarnotError(ValueError):
    """The bracket data violate antisymmetry, Jacobi, the grading or nilpotency."""


class NonInvertibleDenominator(ArithmeticError):
    pass


MAX_CLASS = 4
# integers that must be units for the truncated BCH series of each class
_DENOMINATORS = {1: (), 2: (2,), 3: (2, 3), 4: (2, 3)}


def _payload(ring: Ring, v):
    if isinstance(v, Elem):
        return ring.coerce(v.ring, v.value)
    if isinstance(v, str):
        return ring.parse(v).value
    return v if ring.contains(v) else ring.convert(v)


@dataclass(frozen=True)
class CarnotAlgebra:
    base: Ring
    grading: tuple[int, ...]
    brackets: Mapping[tuple[int, int], tuple] = field(hash=False)
    nilpotency_class: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "grading", tuple(int(g) for g in self.grading))
        if not self.grading or any(g < 0 for g in self.grading):
            raise CarnotError("grading must list non-negative ranks")
        n = self.dim
        table = {}
        for (i, j), vec in dict(self.brackets).items():
            if not (0 <= i < n and 0 <= j < n):
                raise CarnotError(f"bracket index out of range: [{i},{j}]")
            vec = tuple(_payload(self.base, c) for c in vec)
            if len(vec) != n:
                raise CarnotError(f"bracket [{i},{j}] needs {n} coefficients")
            if i == j:
                if any(not self.base.is_zero(c) for c in vec):
                    raise CarnotError(f"[{i},{i}] must vanish")
                continue
            key, val = ((i, j), vec) if i < j else ((j, i), tuple(self.base.neg(c) for c in vec))
            if key in table and table[key] != val:
                raise CarnotError(f"bracket [{i},{j}] is not antisymmetric")
            if any(not self.base.is_zero(c) for c in val):
                table[key] = val
        object.__setattr__(self, "brackets", table)
        self._check_grading()
        self._check_jacobi()
        c = self._compute_class()
        if c > MAX_CLASS:
            raise UnsupportedClass(f"nilpotency class {c} exceeds {MAX_CLASS}")
        object.__setattr__(self, "nilpotency_class", c)

    # -- basic data -------------------------------------------------------

    @property
    def dim(self) -> int:
        return sum(self.grading)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g + 1 for g, r in enumerate(self.grading) for _ in range(r))

    @property
    def zero(self) -> tuple:
        return (self.base.zero,) * self.dim

    def vector(self, coords: Sequence) -> tuple:
        if len(coords) != self.dim:
            raise RingError(f"expected {self.dim} coordinates, got {len(coords)}")
        return tuple(_payload(self.base, c) for c in coords)

    def basis_vector(self, i: int) -> tuple:
        b = self.base
        return tuple(b.one if j == i else b.zero for j in range(self.dim))

    def add(self, u, v):
        return tuple(self.base.add(a, b) for a, b in zip(u, v))

    def neg(self, u):
        return tuple(self.base.neg(a) for a in u)

    def scale(self, c, u):
        return tuple(self.base.mul(c, a) for a in u)

    def bracket(self, u, v) -> tuple:
        b = self.base
        out = list(self.zero)
        for (i, j), vec in self.brackets.items():
            # [u, v] picks up u_i v_j - u_j v_i on the pair (i, j)
            c = b.sub(b.mul(u[i], v[j]), b.mul(u[j], v[i]))
            if b.is_zero(c):
                continue
            for g, x in enumerate(vec):
                if not b.is_zero(x):
                    out[g] = b.add(out[g], b.mul(c, x))
        return tuple(out)

    def with_base(self, ring: Ring) -> "CarnotAlgebra":
        """The same algebra with constants pushed into a ring containing the base."""
        conv = {key: tuple(ring.coerce(self.base, c) for c in vec) for key, vec in self.brackets.items()}
        return CarnotAlgebra(ring, self.grading, conv)

    # -- validation -------------------------------------------------------

    def _check_grading(self):
        deg = self.degrees
        top = len(self.grading)
        for (i, j), vec in self.brackets.items():
            d = deg[i] + deg[j]
            for g, x in enumerate(vec):
                if not self.base.is_zero(x) and (d > top or deg[g] != d):
                    raise CarnotError(f"[e{i},e{j}] leaves grade {d}")

    def _check_jacobi(self):
        n = self.dim
        e = [self.basis_vector(i) for i in range(n)]
        br = self.bracket
        for i, j, k in itertools.combinations(range(n), 3):
            s = self.add(self.add(br(e[i], br(e[j], e[k])), br(e[j], br(e[k], e[i]))), br(e[k], br(e[i], e[j])))
            if any(not self.base.is_zero(x) for x in s):
                raise CarnotError(f"Jacobi identity fails on e{i}, e{j}, e{k}")

    def _compute_class(self) -> int:
        """Length of the longest non-zero left-normed bracket of basis vectors."""
        n = self.dim
        e = [self.basis_vector(i) for i in range(n)]
        level = {v for v in e if any(not self.base.is_zero(x) for x in v)}
        c = 0
        while level:
            c += 1
            nxt = set()
            for v in level:
                for u in e:
                    w = self.bracket(u, v)
                    if any(not self.base.is_zero(x) for x in w):
                        nxt.add(w)
            if c > len(self.grading) + 1:
                raise CarnotError("bracket is not nilpotent")
            level = nxt
        return c

    def check_denominators(self) -> None:
        for d in _DENOMINATORS[max(self.nilpotency_class, 1)]:
            if self.base.inv(self.base.from_int(d)) is NotInvertible:
                raise NonInvertibleDenominator(f"{d} is not invertible in {self.base}")


# ---------------------------------------------------------------------------
# constructors


def abelian(K, n: int) -> CarnotAlgebra:
    return CarnotAlgebra(make_ring(K), (n,), {})


def heisenberg(K) -> CarnotAlgebra:
    """``[e0, e1] = e2`` with grading ``(2, 1)``."""
    K = make_ring(K)
    return CarnotAlgebra(K, (2, 1), {(0, 1): (0, 0, 1)})


def filiform(K, c: int) -> CarnotAlgebra:
    """Model filiform algebra of class ``c``: ``[e0, e_i] = e_{i+1}`` for ``1 <= i < c``."""
    K = make_ring(K)
    n = c + 1
    brackets = {(0, i): tuple(int(g == i + 1) for g in range(n)) for i in range(1, c)}
    return CarnotAlgebra(K, (2,) + (1,) * (c - 1), brackets)


def load_algebra(source) -> CarnotAlgebra:
    """Read an algebra from JSON text, a path, or a parsed dict.

    Format: ``{"ring": "Q", "grading": [2, 1], "brackets": {"0,1": [0, 0, 1]}}``;
    coefficients may be integers or strings in the ring's syntax.
    """
    if isinstance(source, Mapping):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        data = json.loads(text)
    ring = make_ring(data.get("ring", "Q"))
    brackets = {}
    for key, vec in data.get("brackets", {}).items():
        i, j = (int(s) for s in key.strip("[]() ").split(","))
        brackets[(i, j)] = tuple(ring.parse(str(c)).value for c in vec)
    return CarnotAlgebra(ring, tuple(data["grading"]), brackets)


# ---------------------------------------------------------------------------
# group law, dilations, Pansu quotient


def bch_product(A: CarnotAlgebra, v, w) -> tuple:
    """``v * w`` from the BCH series truncated at the nilpotency class."""
    A.check_denominators()
    K = A.base
    v, w = A.vector(v), A.vector(w)
    out = A.add(v, w)
    c = A.nilpotency_class
    if c >= 2:
        half = K.inv(K.from_int(2))
        vw = A.bracket(v, w)
        out = A.add(out, A.scale(half, vw))
    if c >= 3:
        twelfth = K.inv(K.from_int(12))
        out = A.add(out, A.scale(twelfth, A.add(A.bracket(v, vw), A.bracket(w, A.bracket(w, v)))))
    if c >= 4:
        m24 = K.neg(K.inv(K.from_int(24)))
        out = A.add(out, A.scale(m24, A.bracket(w, A.bracket(v, vw))))
    return out


def group_inverse(A: CarnotAlgebra, v) -> tuple:
    return A.neg(A.vector(v))


def dilation(A: CarnotAlgebra, t, v) -> tuple:
    """Multiply grade-``i`` coordinates by ``t^i``."""
    K = A.base
    t = _payload(K, t)
    powers = {}
    out = []
    for d, x in zip(A.degrees, A.vector(v)):
        if d not in powers:
            powers[d] = K.pow(t, d)
        out.append(K.mul(powers[d], x))
    return tuple(out)


def _as_function(f, target: CarnotAlgebra) -> Callable:
    if isinstance(f, PolyMap):
        if f.ring != target.base:
            raise RingError(f"map over {f.ring}, algebra over {target.base}")
        return lambda x: tuple(p.evaluate(list(x)) for p in f.components)
    return f


def pansu_diff1(f, source: CarnotAlgebra, target: CarnotAlgebra, x, v, t) -> tuple:
    """``delta_{1/t}( f(x)^{-1} * f(x * delta_t v) )``."""
    K = target.base
    t = _payload(source.base, t)
    tinv = K.inv(K.coerce(source.base, t))
    if tinv is NotInvertible:
        raise NonInvertibleTime(f"time {source.base.fmt(t)} is not invertible")
    F = _as_function(f, target)
    x, v = source.vector(x), source.vector(v)
    fx = target.vector(F(x))
    moved = target.vector(F(bch_product(source, x, dilation(source, t, v))))
    return dilation(target, tinv, bch_product(target, group_inverse(target, fx), moved))


def graded_heisenberg_map(K, a, b, c, d) -> PolyMap:
    """Lie algebra endomorphism ``(x, y, z) -> (a x + b y, c x + d y, (a d - b c) z)``."""
    from .expr import parse_map

    K = make_ring(K)
    a, b, c, d = (K.fmt_coeff(_payload(K, s)) for s in (a, b, c, d))
    return parse_map(f"(({a})*x + ({b})*y, ({c})*x + ({d})*y, (({a})*({d}) - ({b})*({c}))*z)", K, ("x", "y", "z"))
