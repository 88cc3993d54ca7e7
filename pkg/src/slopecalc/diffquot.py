"""Difference quotient maps and their singular extensions.

Variable convention for the k-th order quotient of ``f : K^m -> K^n``:
space variables are ``x_<bits>`` (``x<i>_<bits>`` when ``m > 1``) and time
variables ``t_<bits>``, with ``bits`` a multi-index of length ``k``.  Going
from order ``k-1`` to ``k``, the base-point block gets prefix bit ``0``, the
direction block prefix bit ``1``, and the new time is ``t_10...0``.  For
``k = 2`` this gives ``((x_00, x_01, t_01), (x_10, x_11, t_11), t_10)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Mapping, Sequence

from .poly import NotDivisible, Poly, PolyError, PolyMap, exact_divide, exact_divide_diff, exact_divide_power
from .rings import Elem, NotInvertible, Ring, invert


class NonInvertibleTime(ArithmeticError):
    """A time parameter (or barycentric difference) is not a unit."""


class ExactDivisionFailed(ArithmeticError):
    """A division that must be exact for polynomial maps was not."""


class ResourceLimit(ValueError):
    pass


def max_order() -> int:
    return int(os.environ.get("SLOPECALC_MAX_K", "5"))


def _check_order(k: int) -> None:
    if k < 0:
        raise ValueError(f"order must be non-negative, got {k}")
    if k > max_order():
        raise ResourceLimit(f"order {k} exceeds limit {max_order()} (set SLOPECALC_MAX_K to raise it)")


# ---------------------------------------------------------------------------
# multi-indices


@dataclass(frozen=True)
class MultiIndex:
    """Element of ``I_k = {0,1}^k``, stored as a bit string."""

    bits: str

    def __post_init__(self):
        if any(b not in "01" for b in self.bits):
            raise ValueError(f"not a multi-index: {self.bits!r}")

    @property
    def k(self) -> int:
        return len(self.bits)

    @property
    def depth(self) -> int:
        return self.bits.count("1")

    def is_zero(self) -> bool:
        return "1" not in self.bits

    def issubset(self, other: "MultiIndex") -> bool:
        return all(a <= b for a, b in zip(self.bits, other.bits))

    def subsets(self) -> list["MultiIndex"]:
        """All ``beta`` with ``beta <= self``, in canonical sub-order."""
        return [spread(MultiIndex(g), self) for g in all_indices(self.depth)]

    def __str__(self):
        return self.bits


def all_indices(k: int) -> list[MultiIndex]:
    """``I_k`` in increasing binary order."""
    return [MultiIndex("".join(b)) for b in iproduct("01", repeat=k)]


def nonzero_indices(k: int) -> list[MultiIndex]:
    return [a for a in all_indices(k) if not a.is_zero()]


def spread(gamma: MultiIndex, alpha: MultiIndex) -> MultiIndex:
    """Place the bits of ``gamma`` (length ``|alpha|``) on the one-positions of ``alpha``."""
    it = iter(gamma.bits)
    return MultiIndex("".join(next(it) if a == "1" else "0" for a in alpha.bits))


def depth(bits: str) -> int:
    return bits.count("1")


# ---------------------------------------------------------------------------
# naming


def space_names(m: int, bits: str = "") -> list[str]:
    return [f"x_{bits}"] if m == 1 else [f"x{i}_{bits}" for i in range(m)]


def output_names(n: int, bits: str = "") -> list[str]:
    return [f"y_{bits}"] if n == 1 else [f"y{j}_{bits}" for j in range(n)]


def time_name(bits: str) -> str:
    return f"t_{bits}"


def split_name(name: str) -> tuple[str, str]:
    head, _, bits = name.rpartition("_")
    return head, bits


def _prefixed(name: str, bit: str) -> str:
    head, bits = split_name(name)
    return f"{head}_{bit}{bits}"


def new_time(k: int) -> str:
    return time_name("1" + "0" * (k - 1))


def domain_variables(m: int, k: int) -> tuple[str, ...]:
    """Ordered domain variables of ``f^[k]`` for ``f`` with ``m`` inputs."""
    names = space_names(m)
    for j in range(1, k + 1):
        names = [_prefixed(v, "0") for v in names] + [_prefixed(v, "1") for v in names] + [new_time(j)]
    return tuple(names)


def canonical(f: PolyMap) -> PolyMap:
    """Relabel ``f`` onto the order-0 names ``x_`` / ``y_``."""
    g = f.relabel(space_names(f.domain_rank))
    return g.with_out_names(output_names(f.codomain_rank))


def _order_of(F: PolyMap) -> int:
    return len(split_name(F.variables[0])[1])


# ---------------------------------------------------------------------------
# symbolic quotients


def _quotient_step(F: PolyMap):
    """One step ``F -> F^[1]`` on canonically named maps.

    Returns ``(variables, base_components, quotient_components, T)``.
    """
    k = _order_of(F) + 1
    T = new_time(k)
    base_vars = [_prefixed(v, "0") for v in F.variables]
    dir_vars = [_prefixed(v, "1") for v in F.variables]
    variables = tuple(base_vars + dir_vars + [T])
    ring = F.ring
    tpoly = Poly.var(ring, variables, T)
    bindings = {
        v: Poly.var(ring, variables, b) + tpoly * Poly.var(ring, variables, d)
        for v, b, d in zip(F.variables, base_vars, dir_vars)
    }
    rename = dict(zip(F.variables, base_vars))
    base, quot = [], []
    for comp in F.components:
        at_base = comp.rename(rename).with_gens(variables)
        shifted = comp.substitute(bindings).with_gens(variables)
        q = exact_divide(shifted - at_base, T)
        if q is NotDivisible:  # pragma: no cover - impossible for polynomials
            raise ExactDivisionFailed(f"numerator of {comp} does not vanish at {T}=0")
        base.append(at_base)
        quot.append(q)
    return variables, base, quot, T


def diff1_sym(f: PolyMap) -> PolyMap:
    """``f^[1](x, v, t)`` as a polynomial map, defined also at ``t = 0``."""
    return diffk_sym(f, 1)


def diffk_sym(f: PolyMap, k: int) -> PolyMap:
    """``f^[k]`` by iterating the first-order quotient ``k`` times."""
    _check_order(k)
    F = canonical(f)
    out_names = F.out_names
    for _ in range(k):
        variables, _, quot, _ = _quotient_step(F)
        F = PolyMap(F.ring, variables, tuple(quot), out_names)
    return F


def extendedk_sym(f: PolyMap, k: int) -> PolyMap:
    """``Delta^[k] f``; outputs are labelled ``y.._<alpha>`` and ``t_<alpha>``."""
    _check_order(k)
    F = canonical(f)
    for _ in range(k):
        variables, base, quot, T = _quotient_step(F)
        names = [_prefixed(n, "0") for n in F.out_names] + [_prefixed(n, "1") for n in F.out_names] + [T]
        comps = tuple(base) + tuple(quot) + (Poly.var(F.ring, variables, T),)
        F = PolyMap(F.ring, variables, comps, tuple(names))
    return F


def extended1(f: PolyMap) -> PolyMap:
    return extendedk_sym(f, 1)


def delta_components(D: PolyMap) -> dict[str, Poly]:
    """Map output label -> component for a map built by :func:`extendedk_sym`."""
    return dict(zip(D.out_names, D.components))


def space_part(D: PolyMap, n: int, alpha: MultiIndex | str) -> list[Poly]:
    """The ``alpha``-component (an ``n``-vector) of ``Delta^[k] f``."""
    bits = str(alpha)
    comps = delta_components(D)
    return [comps[name] for name in output_names(n, bits)]


def differential(f: PolyMap) -> PolyMap:
    """``df(x)v = f^[1](x, v, 0)``, a map in the variables ``(x_0, x_1)``."""
    F = diff1_sym(f)
    T = new_time(1)
    variables = tuple(v for v in F.variables if v != T)
    comps = tuple(c.subs_values({T: 0}).with_gens(variables) for c in F.components)
    return PolyMap(F.ring, variables, comps, F.out_names)


def tangent(f: PolyMap) -> PolyMap:
    """``Tf(x, v) = (f(x), df(x)v)``."""
    df = differential(f)
    F = canonical(f)
    rename = dict(zip(F.variables, (_prefixed(v, "0") for v in F.variables)))
    base = tuple(c.rename(rename).with_gens(df.variables) for c in F.components)
    names = [_prefixed(n, "0") for n in F.out_names] + [_prefixed(n, "1") for n in F.out_names]
    return PolyMap(f.ring, df.variables, base + df.components, tuple(names))


def component_of_delta(f: PolyMap, k: int, alpha: MultiIndex | str) -> PolyMap:
    """The ``alpha``-space-component of ``Delta^[k] f`` built directly as
    ``f^[|alpha|]`` applied to the sub-arguments ``(x_beta, t_beta)_{beta <= alpha}``.

    The result is expressed over the full domain variables of ``Delta^[k] f``.
    """
    alpha = MultiIndex(str(alpha))
    if alpha.k != k:
        raise ValueError(f"multi-index {alpha} is not in I_{k}")
    ell = alpha.depth
    G = diffk_sym(f, ell) if ell else canonical(f)
    mapping = {}
    for v in G.variables:
        head, bits = split_name(v)
        mapping[v] = f"{head}_{spread(MultiIndex(bits), alpha).bits}"
    comps = tuple(c.rename(mapping) for c in G.components)
    full = domain_variables(f.domain_rank, k)
    return PolyMap(f.ring, full, comps, tuple(output_names(f.codomain_rank, alpha.bits)))


# ---------------------------------------------------------------------------
# q-deformation


def _qdeform_bindings(variables, ring, t0):
    gens = tuple(variables) + (t0,)
    tp = Poly.var(ring, gens, t0)
    bindings = {}
    for v in variables:
        d = depth(split_name(v)[1])
        if d:
            bindings[v] = tp**d * Poly.var(ring, gens, v)
    return gens, bindings


def q_time_name(k: int) -> str:
    return time_name("0" * k)


def q_deform(f: PolyMap, k: int) -> PolyMap:
    """Deformed ``f^[k]`` with the extra depth-0 time ``t_0..0`` appended last."""
    F = diffk_sym(f, k)
    t0 = q_time_name(k)
    gens, bindings = _qdeform_bindings(F.variables, F.ring, t0)
    comps = []
    for c in F.components:
        scaled = c.substitute(bindings).with_gens(gens)
        q = exact_divide_power(scaled, t0, k)
        if q is NotDivisible:
            raise ExactDivisionFailed(f"q-deformed component {c} is not divisible by {t0}^{k}")
        comps.append(q)
    return PolyMap(F.ring, gens, tuple(comps), F.out_names)


def q_deform_delta(f: PolyMap, k: int) -> PolyMap:
    """Deformed ``Delta^[k] f``: each component divided by ``t0^(its depth)``."""
    D = extendedk_sym(f, k)
    t0 = q_time_name(k)
    gens, bindings = _qdeform_bindings(D.variables, D.ring, t0)
    comps = []
    for name, c in zip(D.out_names, D.components):
        j = depth(split_name(name)[1])
        scaled = c.substitute(bindings).with_gens(gens)
        q = exact_divide_power(scaled, t0, j)
        if q is NotDivisible:
            raise ExactDivisionFailed(f"component {name} is not divisible by {t0}^{j}")
        comps.append(q)
    return PolyMap(D.ring, gens, tuple(comps), D.out_names)


# ---------------------------------------------------------------------------
# barycentric first-order quotient


def _bary_names(m: int):
    if m == 1:
        return ["x"], ["y"]
    return [f"x{i}" for i in range(m)], [f"y{i}" for i in range(m)]


def bary_diff1_sym(f: PolyMap) -> PolyMap:
    """``(f(s x + (1-s) y) - f(t x + (1-t) y)) / (s - t)`` over ``(x, y, s, t)``."""
    xs, ys = _bary_names(f.domain_rank)
    variables = tuple(xs + ys + ["s", "t"])
    ring = f.ring
    one = Poly.const(ring, variables, ring.one)

    def point(par):
        p = Poly.var(ring, variables, par)
        return {
            v: p * Poly.var(ring, variables, x) + (one - p) * Poly.var(ring, variables, y)
            for v, x, y in zip(f.variables, xs, ys)
        }

    at_s, at_t = point("s"), point("t")
    comps = []
    for c in f.components:
        num = c.substitute(at_s).with_gens(variables) - c.substitute(at_t).with_gens(variables)
        q = exact_divide_diff(num, "s", "t")
        if q is NotDivisible:  # pragma: no cover - numerator always vanishes at s = t
            raise ExactDivisionFailed("barycentric numerator does not vanish on s = t")
        comps.append(q.with_gens(variables))
    return PolyMap(ring, variables, tuple(comps), f.out_names)


# ---------------------------------------------------------------------------
# black-box evaluation


Evaluable = Callable[[Sequence[Elem]], Sequence[Elem]]


def _as_callable(f) -> Evaluable:
    if isinstance(f, PolyMap):
        return f.evaluate
    return f


def _unit(t: Elem, what: str = "time") -> Elem:
    inv = invert(t)
    if inv is NotInvertible:
        raise NonInvertibleTime(f"{what} {t} is not invertible")
    return inv


def diff1_eval(f, x: Sequence[Elem], v: Sequence[Elem], t: Elem) -> list[Elem]:
    """``(f(x + t v) - f(x)) / t`` for invertible ``t``."""
    tinv = _unit(t)
    g = _as_callable(f)
    fx = g(list(x))
    fxt = g([a + t * b for a, b in zip(x, v)])
    return [(b - a) * tinv for a, b in zip(fx, fxt)]


@dataclass(frozen=True)
class DiffArgs:
    """Argument tuple of ``f^[k]``: ``space[bits]`` are vectors, ``time[bits]`` scalars."""

    k: int
    space: Mapping[str, tuple]
    time: Mapping[str, Elem]

    def __post_init__(self):
        want_space = {a.bits for a in all_indices(self.k)}
        want_time = {a.bits for a in nonzero_indices(self.k)}
        if set(self.space) != want_space:
            raise ValueError(f"need {len(want_space)} space entries indexed by I_{self.k}")
        if set(self.time) != want_time:
            raise ValueError(f"need {len(want_time)} time entries indexed by I_{self.k}*")
        object.__setattr__(self, "space", {b: tuple(v) for b, v in self.space.items()})
        object.__setattr__(self, "time", dict(self.time))

    @classmethod
    def random(cls, rng, ring: Ring, m: int, k: int, size: int = 5) -> "DiffArgs":
        space = {a.bits: tuple(Elem(ring, ring.random(rng, size)) for _ in range(m)) for a in all_indices(k)}
        time = {a.bits: Elem(ring, ring.random(rng, size)) for a in nonzero_indices(k)}
        return cls(k, space, time)

    def assignment(self) -> dict[str, Elem]:
        """Values keyed by the variable names of ``f^[k]``."""
        out = {}
        for bits, vec in self.space.items():
            for name, val in zip(space_names(len(vec), bits), vec):
                out[name] = val
        for bits, val in self.time.items():
            out[time_name(bits)] = val
        return out

    def values_for(self, F: PolyMap) -> list[Elem]:
        a = self.assignment()
        return [a[v] for v in F.variables]

    def restrict(self, bit: str) -> "DiffArgs":
        """The block with leading bit ``bit``, as arguments of order ``k - 1``."""
        return DiffArgs(
            self.k - 1,
            {b[1:]: v for b, v in self.space.items() if b[0] == bit},
            {b[1:]: v for b, v in self.time.items() if b[0] == bit and "1" in b[1:]},
        )


def diffk_eval(f, k: int, args: DiffArgs) -> list[Elem]:
    """Nested black-box evaluation of ``f^]k[``; every time met must be a unit."""
    g = _as_callable(f)

    def rec(j: int, a: DiffArgs):
        if j == 0:
            return list(g(list(a.space[""])))
        T = a.time["1" + "0" * (j - 1)]
        tinv = _unit(T)
        base, direc = a.restrict("0"), a.restrict("1")
        shifted = DiffArgs(
            j - 1,
            {b: tuple(p + T * q for p, q in zip(base.space[b], direc.space[b])) for b in base.space},
            {b: base.time[b] + T * direc.time[b] for b in base.time},
        )
        hi, lo = rec(j - 1, shifted), rec(j - 1, base)
        return [(h - l) * tinv for h, l in zip(hi, lo)]

    if args.k != k:
        raise ValueError("argument order does not match k")
    return rec(k, args)


def closed_form_diff2(f, args: DiffArgs) -> list[Elem]:
    """Second-order quotient from the closed two-term formula (black box)."""
    g = _as_callable(f)
    x00, x01, x10, x11 = (args.space[b] for b in ("00", "01", "10", "11"))
    t01, t10, t11 = (args.time[b] for b in ("01", "10", "11"))
    s = t01 + t11 * t10
    inner = [a + t10 * b for a, b in zip(x00, x10)]
    outer = [p + s * (a + t10 * b) for p, a, b in zip(inner, x01, x11)]
    d1 = _unit(t10 * s, "denominator")
    d2 = _unit(t01 * t10, "denominator")
    f_outer, f_inner = g(outer), g(inner)
    f_step, f_base = g([a + t01 * b for a, b in zip(x00, x01)]), g(list(x00))
    return [(fo - fi) * d1 - (fs - fb) * d2 for fo, fi, fs, fb in zip(f_outer, f_inner, f_step, f_base)]


def bary_diff1_eval(f, x: Sequence[Elem], y: Sequence[Elem], s: Elem, t: Elem) -> list[Elem]:
    inv = _unit(s - t, "difference s - t")
    g = _as_callable(f)
    one = s.ring.one_elem
    ps = [s * a + (one - s) * b for a, b in zip(x, y)]
    pt = [t * a + (one - t) * b for a, b in zip(x, y)]
    return [(u - w) * inv for u, w in zip(g(ps), g(pt))]


def substitute_args(F: PolyMap, values: Mapping[str, object]) -> PolyMap:
    """Fix some variables of ``F`` to values or polynomials; keeps the rest."""
    ring = F.ring
    binds = {}
    for k, v in values.items():
        if k not in F.variables:
            raise PolyError(f"unknown variable {k!r}")
        if isinstance(v, Poly):
            binds[k] = v
        else:
            payload = v.value if isinstance(v, Elem) else ring.convert(v)
            binds[k] = Poly.const(ring, (), payload)
    rest = [v for v in F.variables if v not in values]
    extra = []
    for b in binds.values():
        extra.extend(g for g in b.gens if g not in rest and g not in extra)
    variables = tuple(rest + extra)
    return PolyMap(ring, variables, tuple(c.substitute(binds).with_gens(variables) for c in F.components), F.out_names)
