"""Sparse multivariate polynomials and polynomial maps between free modules."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from . import kernels
from .rings import Elem, IntegersMod, Ring, RingMismatch, _Sentinel

#: Returned by :func:`exact_divide` / :func:`exact_divide_diff` on failure.
NotDivisible = _Sentinel("NotDivisible")


class PolyError(ValueError):
    pass


def _modulus(ring: Ring) -> int:
    if isinstance(ring, IntegersMod) and ring.n < 2**31:
        return ring.n
    return 0


class Poly:
    """Polynomial over ``ring`` in the ordered generators ``gens``.

    ``terms`` maps exponent tuples (one entry per generator) to nonzero
    coefficient payloads.  Instances are treated as immutable.
    """

    __slots__ = ("ring", "gens", "terms", "_norm")

    def __init__(self, ring: Ring, gens: Sequence[str], terms: Mapping[tuple, object]):
        self.ring = ring
        self.gens = tuple(gens)
        self.terms = dict(terms)
        self._norm = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, ring, gens, c):
        gens = tuple(gens)
        if ring.is_zero(c):
            return cls(ring, gens, {})
        return cls(ring, gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, ring, gens, name):
        gens = tuple(gens)
        if name not in gens:
            raise PolyError(f"unknown variable {name!r}")
        exp = tuple(int(g == name) for g in gens)
        return cls(ring, gens, {exp: ring.one})

    @classmethod
    def from_terms(cls, ring, gens, terms):
        """Build from possibly non-canonical ``(exponent, coefficient)`` pairs."""
        out: dict = {}
        for e, c in terms:
            e = tuple(e)
            out[e] = ring.add(out[e], c) if e in out else c
        return cls(ring, gens, {e: c for e, c in out.items() if not ring.is_zero(c)})

    def zero_like(self):
        return Poly(self.ring, self.gens, {})

    # generators ---------------------------------------------------------
    def used_vars(self) -> tuple[str, ...]:
        used = [False] * len(self.gens)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(g for g, u in zip(self.gens, used) if u)

    def with_gens(self, gens: Sequence[str]) -> "Poly":
        """Re-express over ``gens``; every used variable must be kept."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        pos = {g: i for i, g in enumerate(gens)}
        if len(pos) != len(gens):
            raise PolyError(f"duplicate generators {gens}")
        moves = []
        for i, g in enumerate(self.gens):
            j = pos.get(g)
            moves.append((i, j))
        out = {}
        n = len(gens)
        for e, c in self.terms.items():
            new = [0] * n
            for i, j in moves:
                if e[i]:
                    if j is None:
                        raise PolyError(f"variable {self.gens[i]!r} missing from {gens}")
                    new[j] = e[i]
            out[tuple(new)] = c
        return Poly(self.ring, gens, out)

    def _align(self, other: "Poly"):
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if other.gens == self.gens:
            return self, other
        gens = self.gens + tuple(g for g in other.gens if g not in self.gens)
        return self.with_gens(gens), other.with_gens(gens)

    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, Elem):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return Poly.const(self.ring, self.gens, other.value)
        return Poly.const(self.ring, self.gens, self.ring.convert(other))

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(self._lift(other))
        ring = a.ring
        out = dict(a.terms)
        for e, c in b.terms.items():
            if e in out:
                s = ring.add(out[e], c)
                if ring.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(ring, a.gens, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.neg
        return Poly(self.ring, self.gens, {e: neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = self._lift(other)
        a, b = self._align(other)
        if not a.terms or not b.terms:
            return Poly(a.ring, a.gens, {})
        ring = a.ring
        if len(a.terms) < len(b.terms):
            a, b = b, a
        terms = kernels.mul_terms(a.terms, b.terms, ring.add, ring.mul, ring.is_zero, _modulus(ring))
        return Poly(ring, a.gens, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise PolyError("negative exponent")
        result = Poly.const(self.ring, self.gens, self.ring.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        """Multiply by a coefficient payload."""
        ring = self.ring
        out = {}
        for e, v in self.terms.items():
            p = ring.mul(v, c)
            if not ring.is_zero(p):
                out[e] = p
        return Poly(ring, self.gens, out)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        if name not in self.gens:
            return 0 if self.terms else -1
        i = self.gens.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * len(self.gens), self.ring.zero)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    # comparison ---------------------------------------------------------
    def _normal(self):
        if self._norm is None:
            gens = self.gens
            self._norm = frozenset(
                (tuple(sorted((gens[i], k) for i, k in enumerate(e) if k)), c) for e, c in self.terms.items()
            )
        return self._norm

    def __eq__(self, other):
        if isinstance(other, Poly):
            if self.ring != other.ring:
                return False
            if self.gens == other.gens:
                return self.terms == other.terms
            return self._normal() == other._normal()
        if isinstance(other, (int, Elem)) or self.ring.contains(other):
            try:
                return self == self._lift(other)
            except (RingMismatch, ValueError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self._normal())

    # structure ----------------------------------------------------------
    def coefficients_in(self, name: str) -> dict[int, "Poly"]:
        """Split as ``sum_d c_d * name^d``; the ``c_d`` keep all generators."""
        if name not in self.gens:
            return {0: self} if self.terms else {}
        i = self.gens.index(name)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            d = e[i]
            parts.setdefault(d, {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {d: Poly(self.ring, self.gens, t) for d, t in parts.items()}

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        gens = tuple(mapping.get(g, g) for g in self.gens)
        if len(set(gens)) != len(gens):
            raise PolyError(f"renaming collides: {gens}")
        return Poly(self.ring, gens, self.terms)

    def diff(self, name: str) -> "Poly":
        """Formal partial derivative."""
        if name not in self.gens:
            return self.zero_like()
        i = self.gens.index(name)
        ring = self.ring
        out = []
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out.append((e[:i] + (k - 1,) + e[i + 1 :], ring.mul(ring.from_int(k), c)))
        return Poly.from_terms(ring, self.gens, out)

    # evaluation ---------------------------------------------------------
    def eval_in(self, target: Ring, values: Sequence, embed: Callable | None = None):
        """Evaluate in an algebra ``target`` over ``self.ring``.

        ``values`` are target payloads, one per generator; ``embed`` maps a
        coefficient payload into ``target`` (defaults to ``target.coerce``).
        """
        if len(values) != len(self.gens):
            raise PolyError(f"expected {len(self.gens)} values, got {len(values)}")
        if embed is None:
            src = self.ring

            def embed(c):
                return target.coerce(src, c)

        powers: list[dict[int, object]] = [{0: target.one, 1: v} for v in values]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = target.mul(power(i, k // 2), power(i, k - k // 2))
            return cache[k]

        acc = target.zero
        for e, c in self.terms.items():
            term = embed(c)
            for i, k in enumerate(e):
                if k:
                    term = target.mul(term, power(i, k))
            acc = target.add(acc, term)
        return acc

    def evaluate(self, values: Sequence):
        """Evaluate at coefficient-ring payloads."""
        return self.eval_in(self.ring, values, lambda c: c)

    def substitute(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneous substitution of polynomials for variables."""
        for name in bindings:
            if name not in self.gens:
                raise PolyError(f"unknown variable {name!r}")
        kept = [g for g in self.gens if g not in bindings]
        gens = list(kept)
        seen = set(gens)
        for b in bindings.values():
            if b.ring != self.ring:
                raise RingMismatch(f"{b.ring} vs {self.ring}")
            for g in b.gens:
                if g not in seen:
                    seen.add(g)
                    gens.append(g)
        gens = tuple(gens)
        target = _PolyAlgebra(self.ring, gens)
        values = []
        for g in self.gens:
            if g in bindings:
                values.append(bindings[g].with_gens(gens))
            else:
                values.append(Poly.var(self.ring, gens, g))
        return self.eval_in(target, values, target.const)

    def subs_values(self, values: Mapping[str, object]) -> "Poly":
        """Substitute coefficient payloads (or ints) for variables."""
        return self.substitute(
            {k: Poly.const(self.ring, (), v if self.ring.contains(v) else self.ring.convert(v)) for k, v in values.items()}
        ).with_gens(tuple(g for g in self.gens if g not in values))

    # text ---------------------------------------------------------------
    def format(self) -> str:
        if not self.terms:
            return "0"
        ring = self.ring
        pieces = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = sorted((self.gens[i], k) for i, k in enumerate(e) if k)
            mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in factors)
            neg = False
            ctext = ring.fmt_coeff(c)
            if ctext.startswith("-") and not ctext.startswith("-("):
                neg, ctext = True, ctext[1:]
            if not mono:
                body = ctext
            elif ctext == "1":
                body = mono
            else:
                body = f"{ctext}*{mono}"
            pieces.append((neg, body))
        out = ("-" if pieces[0][0] else "") + pieces[0][1]
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Poly({self.ring}, {self.gens}, {self.format()})"


class _PolyAlgebra(Ring):
    """Polynomials over fixed generators, viewed as a ring (internal helper)."""

    def __init__(self, base: Ring, gens: tuple[str, ...]):
        self.base = base
        self.gens = gens
        self.zero = Poly(base, gens, {})
        self.one = Poly.const(base, gens, base.one)

    def const(self, c):
        return Poly.const(self.base, self.gens, c)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return not a.terms

    def from_int(self, n):
        return self.const(self.base.from_int(n))


# ---------------------------------------------------------------------------
# division primitives


def exact_divide(p: Poly, v: str):
    """``q`` with ``q * v == p``, or :data:`NotDivisible`."""
    if v not in p.gens:
        return p.zero_like() if not p.terms else NotDivisible
    i = p.gens.index(v)
    out = {}
    for e, c in p.terms.items():
        if not e[i]:
            return NotDivisible
        out[e[:i] + (e[i] - 1,) + e[i + 1 :]] = c
    return Poly(p.ring, p.gens, out)


def exact_divide_power(p: Poly, v: str, k: int):
    q = p
    for _ in range(k):
        q = exact_divide(q, v)
        if q is NotDivisible:
            return NotDivisible
    return q


def exact_divide_diff(p: Poly, u: str, w: str):
    """``q`` with ``q * (u - w) == p``, or :data:`NotDivisible`.

    Synthetic division of ``p`` viewed as univariate in ``u``.
    """
    if u == w:
        raise PolyError("cannot divide by u - u")
    gens = p.gens + tuple(g for g in (u, w) if g not in p.gens)
    p = p.with_gens(gens)
    coeffs = p.coefficients_in(u)
    if not coeffs:
        return p.zero_like()
    wpoly = Poly.var(p.ring, gens, w)
    upoly = Poly.var(p.ring, gens, u)
    n = max(coeffs)
    zero = p.zero_like()
    # q_{j-1} = a_j + w * q_j, from the top down
    q = [zero] * n
    carry = zero
    for j in range(n, 0, -1):
        carry = coeffs.get(j, zero) + wpoly * carry
        q[j - 1] = carry
    remainder = coeffs.get(0, zero) + wpoly * carry
    if remainder:
        return NotDivisible
    result = zero
    upow = Poly.const(p.ring, gens, p.ring.one)
    for j in range(n):
        if q[j]:
            result = result + q[j] * upow
        upow = upow * upoly
    return result


# ---------------------------------------------------------------------------
# polynomial maps


@dataclass(frozen=True, eq=False)
class PolyMap:
    """``f : K^m -> K^n`` given by ``n`` polynomials in ``m`` shared variables.

    ``out_names`` optionally labels the codomain coordinates.
    """

    ring: Ring
    variables: tuple[str, ...]
    components: tuple[Poly, ...]
    out_names: tuple[str, ...] | None = None

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise PolyError(f"duplicate variables {variables}")
        comps = []
        for c in self.components:
            if not isinstance(c, Poly):
                c = Poly.const(self.ring, variables, self.ring.convert(c))
            if c.ring != self.ring:
                raise RingMismatch(f"component over {c.ring}, map over {self.ring}")
            comps.append(c.with_gens(variables))
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "components", tuple(comps))
        if self.out_names is not None:
            names = tuple(self.out_names)
            if len(names) != len(comps):
                raise PolyError("out_names length must match components")
            object.__setattr__(self, "out_names", names)

    @property
    def domain_rank(self) -> int:
        return len(self.variables)

    @property
    def codomain_rank(self) -> int:
        return len(self.components)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.variables == other.variables
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.ring, self.variables, self.components))

    def __getitem__(self, i) -> Poly:
        return self.components[i]

    def evaluate(self, point: Sequence) -> list[Elem]:
        return evaluate(self, point)

    def __call__(self, point):
        return evaluate(self, point)

    def relabel(self, variables: Sequence[str]) -> "PolyMap":
        """Rename the domain variables positionally."""
        mapping = dict(zip(self.variables, variables))
        return PolyMap(self.ring, tuple(variables), tuple(c.rename(mapping) for c in self.components), self.out_names)

    def with_out_names(self, names) -> "PolyMap":
        return PolyMap(self.ring, self.variables, self.components, tuple(names))

    def substitute(self, bindings: Mapping[str, Poly], variables: Sequence[str]) -> "PolyMap":
        comps = tuple(c.substitute(bindings).with_gens(variables) for c in self.components)
        return PolyMap(self.ring, tuple(variables), comps, self.out_names)

    def format(self) -> str:
        inner = ", ".join(c.format() for c in self.components)
        return inner if len(self.components) == 1 else f"({inner})"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"PolyMap({self.ring}, {self.variables}, {self.format()})"


def identity_map(ring: Ring, variables: Sequence[str]) -> PolyMap:
    variables = tuple(variables)
    return PolyMap(ring, variables, tuple(Poly.var(ring, variables, v) for v in variables))


def constant_map(ring: Ring, variables: Sequence[str], values: Sequence) -> PolyMap:
    variables = tuple(variables)
    return PolyMap(ring, variables, tuple(Poly.const(ring, variables, ring.convert(v)) for v in values))


def evaluate(f: PolyMap, point: Sequence) -> list[Elem]:
    """Componentwise evaluation at a point of ``K^m``."""
    if len(point) != f.domain_rank:
        raise PolyError(f"map has {f.domain_rank} variables, point has {len(point)}")
    ring = f.ring
    vals = []
    for p in point:
        if isinstance(p, Elem):
            if p.ring != ring:
                raise RingMismatch(f"point coordinate in {p.ring}, map over {ring}")
            vals.append(p.value)
        else:
            vals.append(ring.convert(p))
    return [Elem(ring, c.evaluate(vals)) for c in f.components]


def compose(g: PolyMap, f: PolyMap) -> PolyMap:
    """``g o f``, by substituting the components of ``f`` into ``g``."""
    if f.codomain_rank != g.domain_rank:
        raise PolyError(f"cannot compose: f has {f.codomain_rank} outputs, g takes {g.domain_rank}")
    if f.ring != g.ring:
        raise RingMismatch(f"{g.ring} vs {f.ring}")
    target = _PolyAlgebra(f.ring, f.variables)
    values = list(f.components)
    comps = tuple(c.eval_in(target, values, target.const) for c in g.components)
    return PolyMap(f.ring, f.variables, comps, g.out_names)


def substitute(p: Poly, bindings: Mapping[str, Poly]) -> Poly:
    return p.substitute(bindings)


def product_map(f: PolyMap, g: PolyMap) -> PolyMap:
    """``f x g`` acting on disjoint variable blocks."""
    if set(f.variables) & set(g.variables):
        raise PolyError("product_map needs disjoint variable names")
    variables = f.variables + g.variables
    return PolyMap(f.ring, variables, f.components + g.components)


# ---------------------------------------------------------------------------
# random generation for test batteries


def random_poly(
    rng: random.Random, ring: Ring, gens: Sequence[str], degree: int = 3, nterms: int = 3, size: int = 5
) -> Poly:
    gens = tuple(gens)
    terms = []
    for _ in range(nterms):
        d = rng.randint(0, degree)
        e = [0] * len(gens)
        for _ in range(d):
            if gens:
                e[rng.randrange(len(gens))] += 1
        c = ring.random(rng, size)
        terms.append((tuple(e), c))
    return Poly.from_terms(ring, gens, terms)


def random_polymap(
    rng: random.Random,
    ring: Ring,
    m: int,
    n: int,
    degree: int = 3,
    nterms: int = 3,
    prefix: str = "x",
) -> PolyMap:
    variables = tuple(f"{prefix}{i}" for i in range(m))
    return PolyMap(ring, variables, tuple(random_poly(rng, ring, variables, degree, nterms) for _ in range(n)))
