"""Exact integral representations of difference quotients over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diffquot import diff1_sym, differential, new_time, space_names
from .divdiff import divdiff_sym, formal_derivative
from .poly import Poly, PolyMap
from .rings import Rationals, RingError


def _require_q(ring) -> None:
    if ring != Rationals():
        raise RingError(f"exact integration needs Q coefficients, got {ring}")


def _antiderivative_between(p: Poly, var: str, upper: Poly) -> Poly:
    """``int_0^upper p d var`` for a polynomial bound free of ``var``."""
    out = Poly.const(p.ring, (), p.ring.zero)
    for j, c in p.coefficients_in(var).items():
        out = out + c * upper ** (j + 1) * Fraction(1, j + 1)
    return out


def exact_segment_integral(p: Poly, var: str = "s") -> Poly:
    """``int_0^1 p d var`` computed monomial by monomial."""
    _require_q(p.ring)
    if var not in p.gens:
        return p
    gens = tuple(g for g in p.gens if g != var)
    one = Poly.const(p.ring, gens, Fraction(1))
    return _antiderivative_between(p, var, one).with_gens(gens)


def simplex_names(k: int) -> tuple[str, ...]:
    return tuple(f"l{i}" for i in range(1, k + 1))


def exact_simplex_integral(p: Poly, names: Sequence[str] | None = None) -> Poly:
    """Integrate over ``{l_i >= 0, sum l_i <= 1}`` in ``names`` (default: every variable).

    The last name is integrated first.
    """
    _require_q(p.ring)
    names = tuple(names) if names is not None else tuple(p.gens)
    rest = tuple(g for g in p.gens if g not in names)
    gens = rest + names
    for i in range(len(names) - 1, -1, -1):
        var = names[i]
        gens = tuple(g for g in gens if g != var)
        upper = Poly.const(p.ring, gens, Fraction(1))
        for prev in names[:i]:
            upper = upper - Poly.var(p.ring, gens, prev)
        p = _antiderivative_between(p.with_gens(gens + (var,)), var, upper)
        p = p.with_gens(gens)
    return p.with_gens(rest)


@dataclass
class IdentityCheck:
    """Two sides of an identity and whether they agree."""

    name: str
    left: tuple
    right: tuple
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.left == self.right

    def witness(self) -> str:
        fmt = lambda side: ", ".join(p.format() for p in side)  # noqa: E731
        return f"{self.name}: left = ({fmt(self.left)}), right = ({fmt(self.right)})"


def integral_diff1(f: PolyMap) -> PolyMap:
    """``int_0^1 df(x + s t v) v ds`` as a map in the variables of ``f^[1]``."""
    _require_q(f.ring)
    df = differential(f)
    target = diff1_sym(f).variables
    m = f.domain_rank
    xs, vs = space_names(m, "0"), space_names(m, "1")
    T = new_time(1)
    gens = tuple(target) + ("s",)
    s, t = Poly.var(f.ring, gens, "s"), Poly.var(f.ring, gens, T)
    binds = {x: Poly.var(f.ring, gens, x) + s * t * Poly.var(f.ring, gens, v) for x, v in zip(xs, vs)}
    binds.update({v: Poly.var(f.ring, gens, v) for v in vs})
    comps = tuple(exact_segment_integral(c.substitute(binds).with_gens(gens), "s").with_gens(target) for c in df.components)
    return PolyMap(f.ring, target, comps, df.out_names)


def check_integral_diff1(f: PolyMap) -> IdentityCheck:
    left = diff1_sym(f)
    right = integral_diff1(f)
    return IdentityCheck("f^[1] = int_0^1 df(x + s t v) v ds", tuple(left.components), tuple(right.components))


NORMALIZATION = "f<k>(t,...,t) = f^(k)(t) / k!  (integral of f^(k) over the simplex, no extra factor)"


def simplex_integral_divdiff(f: PolyMap, k: int) -> PolyMap:
    """``int_{simplex_k} f^(k)(t1 + sum l_i (t_{i+1} - t1))`` in the point variables ``t1..t_{k+1}``."""
    _require_q(f.ring)
    F = divdiff_sym(f, k)
    points = F.variables
    lam = simplex_names(k)
    gens = tuple(points) + lam
    ring = f.ring
    t0 = Poly.var(ring, gens, points[0])
    arg = t0
    for l, p in zip(lam, points[1:]):
        arg = arg + Poly.var(ring, gens, l) * (Poly.var(ring, gens, p) - t0)
    deriv = formal_derivative(f, k)
    var = f.variables[0]
    comps = tuple(exact_simplex_integral(c.substitute({var: arg}).with_gens(gens), lam).with_gens(points) for c in deriv.components)
    return PolyMap(ring, points, comps, f.out_names)


def check_simplex_divdiff(f: PolyMap, k: int) -> IdentityCheck:
    left = divdiff_sym(f, k)
    right = simplex_integral_divdiff(f, k)
    return IdentityCheck(
        f"f<{k}> = simplex integral of f^({k})", tuple(left.components), tuple(right.components), note=NORMALIZATION
    )
