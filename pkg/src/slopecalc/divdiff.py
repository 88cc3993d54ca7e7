"""Divided differences of curves and characteristic-free Taylor coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .diffquot import _as_callable, diffk_sym, new_time, space_names, substitute_args
from .poly import NotDivisible, Poly, PolyMap, exact_divide_diff
from .rings import Elem, NotInvertible, Rationals, Ring, invert


class NonInvertibleDenominator(ArithmeticError):
    def __init__(self, a, b):
        super().__init__(f"difference {a} - {b} is not invertible")
        self.pair = (a, b)


def _curve(f):
    if isinstance(f, PolyMap) and f.domain_rank != 1:
        raise ValueError(f"a curve has one variable, got {f.domain_rank}")
    return _as_callable(f)


def _inv_diff(a: Elem, b: Elem) -> Elem:
    inv = invert(a - b)
    if inv is NotInvertible:
        raise NonInvertibleDenominator(a, b)
    return inv


def divdiff_rec(f, points: Sequence[Elem]) -> list[Elem]:
    """``f^>k<(t_1..t_{k+1})`` by the recursion on ``t_1 - t_{k+1}``.

    Only the denominators the recursion actually divides by are required to
    be units.
    """
    g = _curve(f)
    pts = tuple(points)
    if len(pts) < 2:
        raise ValueError("need at least two points")

    @lru_cache(maxsize=None)
    def rec(i: int, j: int):
        if i == j:
            return tuple(g([pts[i]]))
        inv = _inv_diff(pts[i], pts[j])
        lo, hi = rec(i, j - 1), rec(i + 1, j)
        return tuple((a - b) * inv for a, b in zip(lo, hi))

    return list(rec(0, len(pts) - 1))


def divdiff_explicit(f, points: Sequence[Elem]) -> list[Elem]:
    """``sum_j f(t_j) / prod_{i != j} (t_j - t_i)``; needs all differences to be units."""
    g = _curve(f)
    pts = list(points)
    total = None
    for j, tj in enumerate(pts):
        weight = tj.ring.one_elem
        for i, ti in enumerate(pts):
            if i != j:
                weight = weight * _inv_diff(tj, ti)
        vals = [v * weight for v in g([tj])]
        total = vals if total is None else [a + b for a, b in zip(total, vals)]
    return total


def point_names(k: int) -> tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, k + 2))


def divdiff_poly(p: Poly, var: str, k: int, names: Sequence[str] | None = None) -> Poly:
    """Symbolic ``k``-th divided difference of ``p`` in ``var``; other variables are parameters."""
    names = tuple(names or point_names(k))
    if len(names) != k + 1:
        raise ValueError("need k + 1 point names")
    if set(names) & (set(p.gens) - {var}):
        raise ValueError(f"point names {names} clash with {p.gens}")
    # level j holds the divided differences over consecutive windows of names
    level = [p.rename({var: n}) if var in p.gens else p for n in names]
    for j in range(1, k + 1):
        nxt = []
        for i in range(len(level) - 1):
            lo, hi = level[i], level[i + 1]
            # lo is a function of names[i..i+j-1], hi of names[i+1..i+j]
            q = exact_divide_diff(lo - hi, names[i], names[i + j])
            if q is NotDivisible:  # pragma: no cover - cannot happen for polynomials
                raise ArithmeticError("divided difference numerator does not vanish on the diagonal")
            nxt.append(q)
        level = nxt
    return level[0]


def divdiff_sym(f: PolyMap, k: int) -> PolyMap:
    """``f^<k>`` as a polynomial map in ``t1..t_{k+1}``, defined on all diagonals."""
    if f.domain_rank != 1:
        raise ValueError("divdiff_sym needs a curve")
    if k < 1:
        raise ValueError("order must be at least 1")
    var = f.variables[0]
    names = point_names(k)
    comps = tuple(divdiff_poly(c, var, k, names).with_gens(names) for c in f.components)
    return PolyMap(f.ring, names, comps, f.out_names)


def formal_derivative(f: PolyMap, k: int = 1) -> PolyMap:
    var = f.variables[0]
    comps = []
    for c in f.components:
        for _ in range(k):
            c = c.diff(var)
        comps.append(c)
    return PolyMap(f.ring, f.variables, tuple(comps), f.out_names)


def diagonal(F: PolyMap, name: str = "t") -> PolyMap:
    """Restrict ``F`` to the full diagonal ``t1 = ... = t_{k+1} = name``."""
    ring = F.ring
    tp = Poly.var(ring, (name,), name)
    return PolyMap(ring, (name,), tuple(c.substitute({v: tp for v in F.variables}).with_gens((name,)) for c in F.components))


@dataclass
class NormalizationReport:
    """Outcome of testing two diagonal normalizations on monomials."""

    max_degree: int
    rows: list[tuple[int, int, str, str, str]] = field(default_factory=list)
    factorial_times_derivative: bool = True
    derivative_over_factorial: bool = True

    @property
    def consistent(self) -> str:
        if self.derivative_over_factorial and not self.factorial_times_derivative:
            return "f<k>(t,...,t) = f^(k)(t) / k!"
        if self.factorial_times_derivative and not self.derivative_over_factorial:
            return "f<k>(t,...,t) = k! f^(k)(t)"
        if self.factorial_times_derivative:
            return "both (only trivial cases tested)"
        return "neither"

    def lines(self) -> list[str]:
        out = ["d k  diagonal  k!*f^(k)  f^(k)/k!"]
        out += [f"{d} {k}  {diag}  {a}  {b}" for d, k, diag, a, b in self.rows]
        out.append(f"k! f^(k)(t) = f<k>(t,...,t): {'holds' if self.factorial_times_derivative else 'FAILS'}")
        out.append(f"f^(k)(t) / k! = f<k>(t,...,t): {'holds' if self.derivative_over_factorial else 'FAILS'}")
        out.append(f"consistent normalization: {self.consistent}")
        return out


def normalization_report(max_degree: int = 6) -> NormalizationReport:
    """Compare the diagonal of ``f^<k>`` with ``k! f^(k)`` and ``f^(k)/k!`` for ``t^d``."""
    Q = Rationals()
    report = NormalizationReport(max_degree)
    for d in range(max_degree + 1):
        f = monomial_curve(Q, d)
        for k in range(1, max(d, 1) + 1):
            diag = diagonal(divdiff_sym(f, k))[0]
            deriv = formal_derivative(f, k)[0].rename({"u": "t"})
            times = deriv.scale(Fraction(factorial(k)))
            over = deriv.scale(Fraction(1, factorial(k)))
            report.rows.append((d, k, diag.format(), times.format(), over.format()))
            report.factorial_times_derivative &= diag == times
            report.derivative_over_factorial &= diag == over
    return report


def monomial_curve(ring: Ring, d: int, var: str = "u") -> PolyMap:
    return PolyMap(ring, (var,), (Poly.from_terms(ring, (var,), [((d,), ring.one)]),))


def diagonal_identity_holds(f: PolyMap, k: int) -> bool:
    """``f<k>(t,...,t) == f^(k)(t) / k!`` (the normalization that survives the check)."""
    ring = f.ring
    inv = ring.inv(ring.from_int(factorial(k)))
    if inv is NotInvertible:
        raise ArithmeticError(f"{k}! is not invertible in {ring}")
    diag = diagonal(divdiff_sym(f, k))
    deriv = formal_derivative(f, k).relabel(("t",))
    return all(a == b.scale(inv) for a, b in zip(diag.components, deriv.components))


# ---------------------------------------------------------------------------
# Taylor coefficients


def taylor_names(m: int) -> tuple[list[str], list[str]]:
    if m == 1:
        return ["x"], ["h"]
    return [f"x{i}" for i in range(m)], [f"h{i}" for i in range(m)]


def taylor_direct(f: PolyMap, k: int | None = None) -> dict[int, PolyMap]:
    """Coefficients ``a_j(x, h)`` of ``t^j`` in ``f(x + t h)``, for ``1 <= j <= k``."""
    xs, hs = taylor_names(f.domain_rank)
    variables = tuple(xs + hs)
    gens = variables + ("t",)
    ring = f.ring
    tp = Poly.var(ring, gens, "t")
    binds = {v: Poly.var(ring, gens, x) + tp * Poly.var(ring, gens, h) for v, x, h in zip(f.variables, xs, hs)}
    expanded = [c.substitute(binds).with_gens(gens) for c in f.components]
    if k is None:
        k = max((c.degree() for c in f.components), default=0)
    out = {}
    for j in range(1, k + 1):
        comps = tuple(_drop_t(e.coefficients_in("t").get(j, e.zero_like()), variables) for e in expanded)
        out[j] = PolyMap(ring, variables, comps, f.out_names)
    return out


def _drop_t(c: Poly, variables) -> Poly:
    i = c.gens.index("t")
    return Poly(c.ring, variables, {e[:i] + e[i + 1 :]: v for e, v in c.terms.items()})


def slope_coefficients(f: PolyMap) -> tuple[PolyMap, PolyMap]:
    """``a_1 = f^[1](x,h,0)`` and ``a_2 = f^[2]((x,h,0),(0,0,1),0)`` over ``(x, h)``."""
    m = f.domain_rank
    xs, hs = taylor_names(m)
    ring = f.ring
    variables = tuple(xs + hs)

    def var(n):
        return Poly.var(ring, variables, n)

    F1 = diffk_sym(f, 1)
    b1 = {n: var(x) for n, x in zip(space_names(m, "0"), xs)}
    b1.update({n: var(h) for n, h in zip(space_names(m, "1"), hs)})
    b1[new_time(1)] = Poly.const(ring, variables, ring.zero)
    a1 = substitute_args(F1, b1)

    F2 = diffk_sym(f, 2)
    zero = Poly.const(ring, variables, ring.zero)
    one = Poly.const(ring, variables, ring.one)
    b2 = {n: var(x) for n, x in zip(space_names(m, "00"), xs)}
    b2.update({n: var(h) for n, h in zip(space_names(m, "01"), hs)})
    b2.update({n: zero for n in space_names(m, "10") + space_names(m, "11")})
    b2.update({"t_01": zero, "t_11": one, "t_10": zero})
    a2 = substitute_args(F2, b2)
    return (
        PolyMap(ring, variables, tuple(c.with_gens(variables) for c in a1.components), f.out_names),
        PolyMap(ring, variables, tuple(c.with_gens(variables) for c in a2.components), f.out_names),
    )


def curve_link(f: PolyMap, shifted: bool = False) -> tuple[bool, list[tuple[Poly, Poly]]]:
    """Compare ``f^[2]((x,h,t),(0,0,1),s)`` with a divided difference of
    ``gamma(u) = f(x + u h)``.

    With ``shifted=False`` the right side is ``gamma^<2>(0, t, s)``; with
    ``shifted=True`` it is ``gamma^<2>(0, t, t + s)``.  The first form only
    holds for maps of degree at most 2; the second holds for every
    polynomial map.  Returns the verdict and the ``(left, right)`` pairs.
    """
    m = f.domain_rank
    xs, hs = taylor_names(m)
    ring = f.ring
    params = tuple(xs + hs + ["t", "s"])

    def var(n):
        return Poly.var(ring, params, n)

    zero = Poly.const(ring, params, ring.zero)
    one = Poly.const(ring, params, ring.one)
    F2 = diffk_sym(f, 2)
    b = {n: var(x) for n, x in zip(space_names(m, "00"), xs)}
    b.update({n: var(h) for n, h in zip(space_names(m, "01"), hs)})
    b.update({n: zero for n in space_names(m, "10") + space_names(m, "11")})
    b.update({"t_01": var("t"), "t_11": one, "t_10": var("s")})
    lhs = substitute_args(F2, b)

    gens = tuple(xs + hs + ["u"])
    up = Poly.var(ring, gens, "u")
    gamma_binds = {v: Poly.var(ring, gens, x) + up * Poly.var(ring, gens, h) for v, x, h in zip(f.variables, xs, hs)}
    last = var("t") + var("s") if shifted else var("s")
    pairs = []
    for comp, left in zip(f.components, lhs.components):
        gamma = comp.substitute(gamma_binds).with_gens(gens)
        dd = divdiff_poly(gamma, "u", 2, ("p1", "p2", "p3"))
        right = dd.substitute({"p1": zero, "p2": var("t"), "p3": last}).with_gens(params)
        pairs.append((left.with_gens(params), right))
    return all(a == b for a, b in pairs), pairs


def taylor_from_divdiff(f: PolyMap, k: int) -> PolyMap:
    """``a_k(x, h) = f^<k>(x, ..., x) h^k`` for a curve ``f``."""
    ring = f.ring
    variables = ("x", "h")
    F = divdiff_sym(f, k)
    xp = Poly.var(ring, variables, "x")
    hk = Poly.var(ring, variables, "h") ** k
    comps = tuple(c.substitute({v: xp for v in F.variables}).with_gens(variables) * hk for c in F.components)
    return PolyMap(ring, variables, comps, f.out_names)
