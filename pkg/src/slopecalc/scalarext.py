"""Scalar-extension rings obtained from difference quotients of multiplication.

The ring of order ``k`` over ``K`` is the free ``C``-module with basis
``omega_alpha`` (``alpha`` a ``k``-bit string, ``omega_0...0 = 1``), where ``C``
is ``K`` or ``K[t..]`` when some times stay symbolic.  Its product is read
off from ``Delta^[k]`` of ``m(x, y) = x*y``: the ``alpha``-component of the
first factor pairs with the ``alpha``-component of the second.  Basis
index ``i`` corresponds to the bit string of ``i`` written with ``k`` digits.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import kernels
from .diffquot import (
    MultiIndex,
    all_indices,
    delta_components,
    extendedk_sym,
    nonzero_indices,
    output_names,
    space_names,
    time_name,
)
from .poly import Poly, PolyMap
from .rings import (
    IntegersMod,
    NotInvertible,
    PolynomialRing,
    Ring,
    RingError,
    RingMismatch,
    StructureConstantAlgebra,
    Elem,
    determinant,
    make_ring,
)


class SearchTooLarge(ValueError):
    """The automorphism search exceeds the configured bounds."""


SYMBOLIC = None


def symbol_name(bits: str) -> str:
    """Name of the symbolic time attached to ``bits`` in the coefficient ring."""
    return "t" if len(bits) == 1 else f"t{bits}"


def parse_time(text: str | None, k: int, base: Ring) -> dict[str, object]:
    """Parse a time assignment.

    Accepts ``symbolic``, a comma list of values in bit order
    (``t01, t10, t11`` for ``k = 2``), or ``name=value`` pairs where the value
    may be ``symbolic``.  Unassigned times stay symbolic.
    """
    bits = [str(a) for a in nonzero_indices(k)]
    out: dict[str, object] = {b: SYMBOLIC for b in bits}
    if text is None or text.strip() in ("", "symbolic", "sym"):
        return out
    parts = [p.strip() for p in text.split(",") if p.strip()]
    by_name = {symbol_name(b): b for b in bits} | {time_name(b): b for b in bits} | {b: b for b in bits}
    if all("=" not in p for p in parts):
        if len(parts) != len(bits):
            raise RingError(f"expected {len(bits)} time values, got {len(parts)}")
        pairs = zip(bits, parts)
    else:
        pairs = []
        for p in parts:
            name, _, value = p.partition("=")
            if name.strip() not in by_name:
                raise RingError(f"unknown time {name.strip()!r}")
            pairs.append((by_name[name.strip()], value.strip()))
    for b, value in pairs:
        out[b] = SYMBOLIC if value in ("symbolic", "sym") else base.parse(value)
    return out


@dataclass(frozen=True)
class ExtensionRing:
    base: Ring
    k: int
    time: tuple  # ((bits, value or None), ...)
    coeff: Ring
    basis: tuple[str, ...]
    constants: tuple = field(repr=False)
    algebra: StructureConstantAlgebra = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def symbolic(self) -> tuple[str, ...]:
        return tuple(symbol_name(b) for b, v in self.time if v is SYMBOLIC)

    def index(self, bits: str | MultiIndex) -> int:
        return self.basis.index(str(bits))

    def constant(self, alpha, beta, gamma):
        return self.constants[self.index(alpha)][self.index(beta)][self.index(gamma)]

    def basis_vector(self, bits) -> tuple:
        return self.algebra.basis_vector(self.index(bits))

    def vector(self, coords: Sequence) -> tuple:
        """Coerce a coordinate sequence into the coefficient ring."""
        if len(coords) != self.rank:
            raise RingMismatch(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(_payload(self.coeff, c) for c in coords)

    def table(self) -> list[tuple[str, str, str, object]]:
        """Non-zero structure constants as ``(alpha, beta, gamma, c)`` rows."""
        rows = []
        C = self.coeff
        for a, b, g in itertools.product(range(self.rank), repeat=3):
            c = self.constants[a][b][g]
            if not C.is_zero(c):
                rows.append((self.basis[a], self.basis[b], self.basis[g], c))
        return rows


def _payload(ring: Ring, v):
    if isinstance(v, Elem):
        return ring.coerce(v.ring, v.value)
    return v if ring.contains(v) else ring.convert(v)


def _time_bindings(k: int, time: Mapping[str, object], base: Ring, coeff_gens: tuple[str, ...]):
    """Map each ``t_alpha`` to a polynomial over ``base`` in ``coeff_gens``."""
    binds = {}
    for a in nonzero_indices(k):
        b = str(a)
        v = time.get(b, SYMBOLIC)
        if v is SYMBOLIC:
            binds[time_name(b)] = Poly.var(base, coeff_gens, symbol_name(b))
        else:
            binds[time_name(b)] = Poly.const(base, coeff_gens, v)
    return binds


def _to_coeff(p: Poly, coeff: Ring, gens: tuple[str, ...]):
    if not gens:
        return p.constant_term()
    return p.with_gens(gens)


def build_extension_ring(K, k: int, time: Mapping[str, object] | str | None = None) -> ExtensionRing:
    """Construct ``Delta_t^[k] K`` from the difference quotient of ``x*y``.

    ``time`` maps bit strings to base-ring values or ``None`` (symbolic); a
    string is parsed with :func:`parse_time`.
    """
    K = make_ring(K)
    if k < 1:
        raise ValueError("order must be at least 1")
    if time is None or isinstance(time, str):
        time = parse_time(time, k, K)
    time = {str(b): (v if v is SYMBOLIC else _payload(K, v)) for b, v in time.items()}
    bits = [str(a) for a in all_indices(k)]
    times = tuple((str(a), time.get(str(a), SYMBOLIC)) for a in nonzero_indices(k))
    gens = tuple(symbol_name(b) for b, v in times if v is SYMBOLIC)
    coeff = PolynomialRing(K, gens) if gens else K

    mult = PolyMap(K, ("a", "b"), (Poly.var(K, ("a", "b"), "a") * Poly.var(K, ("a", "b"), "b"),))
    D = delta_components(extendedk_sym(mult, k))
    tb = _time_bindings(k, time, K, gens)
    r = len(bits)
    pos = {b: i for i, b in enumerate(bits)}
    zero = coeff.zero
    table = [[[zero] * r for _ in range(r)] for _ in range(r)]
    for g, gb in enumerate(bits):
        comp = D[output_names(1, gb)[0]]
        for exps, c in comp.terms.items():
            left = right = None
            tpart = {}
            for name, e in zip(comp.gens, exps):
                if not e:
                    continue
                head, _, vb = name.rpartition("_")
                if head == "x0" and e == 1 and left is None:
                    left = vb
                elif head == "x1" and e == 1 and right is None:
                    right = vb
                elif head == "t":
                    tpart[name] = e
                else:
                    raise RingError(f"product component {gb} is not bilinear")
            if left is None or right is None:
                raise RingError(f"product component {gb} is not bilinear")
            mono = Poly.const(K, gens, c)
            for name, e in tpart.items():
                mono = mono * tb[name] ** e
            a, b = pos[left], pos[right]
            table[a][b][g] = coeff.add(table[a][b][g], _to_coeff(mono, coeff, gens))
    constants = tuple(tuple(tuple(p) for p in plane) for plane in table)
    _check_additive(K, k)
    algebra = StructureConstantAlgebra(coeff, r, constants)
    return ExtensionRing(K, k, times, coeff, tuple(bits), constants, algebra)


def _check_additive(K: Ring, k: int) -> None:
    """Delta of ``x + y`` must act componentwise."""
    add = PolyMap(K, ("a", "b"), (Poly.var(K, ("a", "b"), "a") + Poly.var(K, ("a", "b"), "b"),))
    D = delta_components(extendedk_sym(add, k))
    for a in all_indices(k):
        b = str(a)
        comp = D[output_names(1, b)[0]]
        want = Poly.var(K, comp.gens, f"x0_{b}") + Poly.var(K, comp.gens, f"x1_{b}")
        if comp != want:
            raise RingError(f"addition is not componentwise at {b}")


def ext_mul(R: ExtensionRing, a: Sequence, b: Sequence) -> tuple:
    return R.algebra.mul(R.vector(a), R.vector(b))


# ---------------------------------------------------------------------------
# ring axioms and structure probes


@dataclass
class AxiomReport:
    commutative: bool
    unital: bool
    associative: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.commutative and self.unital and self.associative


def check_axioms(R: ExtensionRing) -> AxiomReport:
    C, r, T = R.coeff, R.rank, R.constants
    failures = []
    comm = unit = True
    for a, b in itertools.product(range(r), repeat=2):
        if T[a][b] != T[b][a]:
            comm = False
            failures.append(f"commutativity {R.basis[a]} {R.basis[b]}")
    for b, g in itertools.product(range(r), repeat=2):
        want = C.one if b == g else C.zero
        if T[0][b][g] != want:
            unit = False
            failures.append(f"unit {R.basis[b]} {R.basis[g]}")
    alg = R.algebra
    assoc = True
    e = [alg.basis_vector(i) for i in range(r)]
    for a, b, c in itertools.product(range(r), repeat=3):
        if alg.mul(alg.mul(e[a], e[b]), e[c]) != alg.mul(e[a], alg.mul(e[b], e[c])):
            assoc = False
            failures.append(f"associativity {R.basis[a]} {R.basis[b]} {R.basis[c]}")
    return AxiomReport(comm, unit, assoc, failures)


@dataclass
class TriangularityReport:
    k: int
    holds: bool
    violations: list[tuple[str, str, str]]


def triangularity_probe(R: ExtensionRing) -> TriangularityReport:
    """Is ``c_{a,b}^g = 0`` unless ``a`` and ``b`` are both subsets of ``g``?"""
    bad = []
    for a, b, g, _ in R.table():
        ga = MultiIndex(g)
        if not (MultiIndex(a).issubset(ga) and MultiIndex(b).issubset(ga)):
            bad.append((a, b, g))
    return TriangularityReport(R.k, not bad, bad)


def order2_relations(R: ExtensionRing) -> dict[str, tuple[tuple, tuple]]:
    """The five defining products of the order-2 ring, as ``(computed, expected)``.

    Requires all three times symbolic.
    """
    if R.k != 2 or len(R.symbolic) != 3:
        raise ValueError("needs the order-2 ring with symbolic times")
    C = R.coeff
    t01, t10, t11 = (C.generator(n) for n in ("t01", "t10", "t11"))
    z = C.zero

    def vec(**kw):
        return tuple(kw.get(f"w{b}", z) for b in R.basis)

    w = {b: R.basis_vector(b) for b in R.basis}
    mul = R.algebra.mul
    return {
        "w10^2 = t10 w10": (mul(w["10"], w["10"]), vec(w10=t10)),
        "w01 w10 = w11": (mul(w["01"], w["10"]), vec(w11=C.one)),
        "w01^2 = t01 w01 + t11 w11": (mul(w["01"], w["01"]), vec(w01=t01, w11=t11)),
        "w10 w11 = t10 w11": (mul(w["10"], w["11"]), vec(w11=t10)),
        "w01 w11 = (t01 + t10 t11) w11": (mul(w["01"], w["11"]), vec(w11=C.add(t01, C.mul(t10, t11)))),
    }


# ---------------------------------------------------------------------------
# two-step adjunction oracle


def _reduce(p: Poly, rules: Mapping[str, Poly]) -> Poly:
    """Normal form modulo ``X^2 = rules[X]`` (each rule already multiplied by ``X``)."""
    gens = p.gens
    changed = True
    while changed:
        changed = False
        out = p.zero_like()
        for exps, c in p.terms.items():
            hit = next((i for i, e in enumerate(exps) if e >= 2 and gens[i] in rules), None)
            mono = Poly(p.ring, gens, {exps: c})
            if hit is None:
                out = out + mono
                continue
            lowered = list(exps)
            lowered[hit] -= 2
            out = out + Poly(p.ring, gens, {tuple(lowered): c}) * rules[gens[hit]].with_gens(gens)
            changed = True
        p = out
    return p


@dataclass
class AdjunctionReport:
    time: tuple
    match: bool
    mismatches: list[tuple[str, str]]
    w11_squared: object  # coefficient of w11 in w11^2 from the quotient ring


def _adjunction_coeff(K: Ring, t01, t10, t11):
    values = {"01": t01, "10": t10, "11": t11}
    gens = tuple(symbol_name(b) for b in ("01", "10", "11") if values[b] is SYMBOLIC)
    coeff = PolynomialRing(K, gens) if gens else K

    def tval(b):
        v = values[b]
        return Poly.var(K, gens, symbol_name(b)) if v is SYMBOLIC else Poly.const(K, gens, _payload(K, v))

    return values, gens, coeff, tval


def verify_iterated_adjunction(K, t01=SYMBOLIC, t10=SYMBOLIC, t11=SYMBOLIC) -> AdjunctionReport:
    """Compare the order-2 ring with ``K[X1]/(X1^2 - t10 X1)`` then ``[X2]/(X2^2 - (t01 + t11 X1) X2)``.

    The basis ``1, X1, X2, X1 X2`` is matched with ``w00, w10, w01, w11``.
    """
    K = make_ring(K)
    values, gens, coeff, tval = _adjunction_coeff(K, t01, t10, t11)
    R = build_extension_ring(K, 2, values)
    # polynomials over K in the symbolic times and X1, X2
    allg = gens + ("X1", "X2")
    X1, X2 = Poly.var(K, allg, "X1"), Poly.var(K, allg, "X2")
    lift = lambda p: p.with_gens(allg)  # noqa: E731
    rules = {"X1": lift(tval("10")) * X1, "X2": (lift(tval("01")) + lift(tval("11")) * X1) * X2}
    monos = {"00": (0, 0), "10": (1, 0), "01": (0, 1), "11": (1, 1)}
    one = Poly.const(K, allg, K.one)
    mono_poly = {b: one * X1 ** e1 * X2 ** e2 for b, (e1, e2) in monos.items()}
    mismatches = []
    w11sq = None
    for a, b in itertools.product(R.basis, repeat=2):
        prod = _reduce(mono_poly[a] * mono_poly[b], rules)
        for g, (e1, e2) in monos.items():
            c = Poly.const(K, gens, K.zero)
            for exps, v in prod.terms.items():
                if exps[-2:] == (e1, e2):
                    c = c + Poly(K, gens, {exps[:-2]: v})
            got = _to_coeff(c, coeff, gens)
            if a == b == g == "11":
                w11sq = got
            if R.constant(a, b, g) != got:
                mismatches.append((f"{a}*{b}", g))
    return AdjunctionReport(tuple(values.items()), not mismatches, mismatches, w11sq)


@dataclass
class SquareFinding:
    computed: object
    quotient_oracle: object
    chain_value: object
    printed_value: object

    @property
    def oracle_agrees(self) -> bool:
        return self.computed == self.quotient_oracle

    @property
    def matches_chain(self) -> bool:
        return self.computed == self.chain_value

    @property
    def matches_printed(self) -> bool:
        return self.computed == self.printed_value


def w11_square_finding(K="Q") -> SquareFinding:
    """Coefficient of ``w11`` in ``w11^2`` against two candidate closed forms.

    ``chain_value`` is ``t10 (t01 + t10 t11)``, ``printed_value`` is
    ``t01 (t10 + t01 t11)``.
    """
    R = build_extension_ring(K, 2, None)
    C = R.coeff
    t01, t10, t11 = (C.generator(n) for n in ("t01", "t10", "t11"))
    chain = C.mul(t10, C.add(t01, C.mul(t10, t11)))
    printed = C.mul(t01, C.add(t10, C.mul(t01, t11)))
    oracle = verify_iterated_adjunction(R.base).w11_squared
    return SquareFinding(R.constant("11", "11", "11"), oracle, chain, printed)


# ---------------------------------------------------------------------------
# scalar extension of polynomial maps


def scalar_extension_apply(f: PolyMap, R: ExtensionRing, args: Sequence[Sequence]) -> list[tuple]:
    """Evaluate ``f`` on ``R``-points (each point given by its coordinates)."""
    if f.ring != R.base:
        raise RingMismatch(f"map over {f.ring!r}, ring over {R.base!r}")
    if len(args) != f.domain_rank:
        raise RingMismatch(f"expected {f.domain_rank} arguments, got {len(args)}")
    alg = R.algebra
    values = [R.vector(a) for a in args]
    embed = lambda c: alg.coerce(R.base, c)  # noqa: E731
    return [p.eval_in(alg, values, embed) for p in f.components]


def delta_point(f: PolyMap, R: ExtensionRing, args: Sequence[Sequence]) -> list[tuple]:
    """Space part of ``Delta^[k] f`` at ``x_alpha = args[i][alpha]`` and the ring's times.

    The result is arranged like :func:`scalar_extension_apply`: one
    coordinate vector per output.
    """
    K, k = R.base, R.k
    gens = R.coeff.variables if isinstance(R.coeff, PolynomialRing) else ()
    D = extendedk_sym(f, k)
    binds = _time_bindings(k, dict(R.time), K, gens)
    m = f.domain_rank
    for b_i, bits in enumerate(R.basis):
        for name, vec in zip(space_names(m, bits), args):
            c = R.vector(vec)[b_i]
            binds[name] = c.with_gens(gens) if gens else Poly.const(K, gens, c)
    comps = delta_components(D)
    out = []
    for j in range(f.codomain_rank):
        name_j = lambda bits: output_names(f.codomain_rank, bits)[j]  # noqa: E731
        out.append(tuple(_to_coeff(comps[name_j(bits)].substitute(binds).with_gens(gens), R.coeff, gens) for bits in R.basis))
    return out


# ---------------------------------------------------------------------------
# automorphisms


def _bound(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


@dataclass
class AutomorphismResult:
    ring: ExtensionRing
    matrices: list[tuple[tuple[int, ...], ...]]  # columns are images of basis vectors
    candidates: int

    @property
    def order(self) -> int:
        return len(self.matrices)


def _pair_schedule(r: int, T, order: list[int], zero) -> list[list[tuple[int, int]]]:
    position = {idx: s for s, idx in enumerate(order)}
    position[0] = -1
    schedule = [[] for _ in order]
    for a in range(1, r):
        for b in range(a, r):
            support = {a, b} | {g for g in range(r) if T[a][b][g] != zero}
            step = max(position[i] for i in support)
            schedule[step].append((a, b))
    return schedule


def automorphism_search(
    R: ExtensionRing,
    max_k: int | None = None,
    max_base: int | None = None,
    max_candidates: int | None = None,
) -> AutomorphismResult:
    """All unital base-linear ring automorphisms of ``R``.

    Candidate images are enumerated by backtracking, checking each product
    relation as soon as every basis vector it involves has an image; the
    survivors are kept when their matrix is invertible.
    """
    max_k = max_k if max_k is not None else _bound("SLOPECALC_MAX_AUT_K", 2)
    max_base = max_base if max_base is not None else _bound("SLOPECALC_MAX_AUT_BASE", 5)
    max_candidates = max_candidates if max_candidates is not None else _bound("SLOPECALC_MAX_SEARCH", 5**12)
    C = R.coeff
    if not isinstance(C, IntegersMod):
        raise ValueError("automorphism search needs a finite base ring Z/n and numeric times")
    n, r = C.n, R.rank
    candidates = n ** (r * (r - 1))
    if R.k > max_k or n > max_base or candidates > max_candidates:
        raise SearchTooLarge(
            f"order {R.k} over Z/{n}: {candidates} candidate maps (bounds: k <= {max_k}, |K| <= {max_base}, "
            f"{max_candidates} candidates)"
        )
    T = R.constants
    flat = [T[a][b][g] % n for a in range(r) for b in range(r) for g in range(r)]
    order = list(range(r - 1, 0, -1))
    schedule = _pair_schedule(r, T, order, C.zero)
    found = kernels.aut_search(n, r, flat, order, schedule, candidates + 1)
    mats = []
    for images in found:
        cols = [tuple(v) for v in images]
        mat = tuple(tuple(cols[j][i] for j in range(r)) for i in range(r))
        if C.inv(determinant(C, mat)) is not NotInvertible:
            mats.append(mat)
    mats.sort()
    return AutomorphismResult(R, mats, candidates)

