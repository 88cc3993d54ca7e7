"""Randomized and exhaustive verification suites.

Each suite returns a :class:`SuiteReport`; a failing check carries a
witness (the inputs and both sides) so that it can be reproduced.
Suites are deterministic functions of their seed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Iterable

from . import analytic, carnot, diffquot, divdiff, scalarext
from .diffquot import DiffArgs
from .expr import parse_map
from .poly import Poly, PolyMap, compose, identity_map, random_polymap
from .rings import Elem, IntegersMod, NotInvertible, PolynomialRing, Rationals, invert


@dataclass
class Check:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class SuiteReport:
    suite: str
    title: str
    checks: list[Check] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witness: str = "") -> None:
        self.checks.append(Check(name, bool(ok), "" if ok else witness))

    def battery(self, name: str, cases: Iterable, test: Callable) -> None:
        """Run ``test(case) -> (ok, witness)`` on every case; keep the first failure."""
        n = 0
        for case in cases:
            n += 1
            ok, witness = test(case)
            if not ok:
                self.add(f"{name} [case {n}]", False, witness)
                return
        self.add(f"{name} [{n} cases]", True)

    def lines(self) -> list[str]:
        out = [f"[{'PASS' if self.ok else 'FAIL'}] {self.suite}: {self.title}"]
        for c in self.checks:
            out.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.name}")
            if c.witness:
                out.extend(f"       {w}" for w in c.witness.splitlines())
        out.extend(f"  finding: {f}" for f in self.findings)
        return out

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "title": self.title,
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "witness": c.witness} for c in self.checks],
            "findings": list(self.findings),
        }


Q = Rationals()


def _fmt_map(f: PolyMap) -> str:
    return f"{f.ring}: ({', '.join(f.variables)}) -> {f.format()}"


def _maps(rng: random.Random, ring, count: int, max_rank: int, degree: int, nterms: int = 3):
    for _ in range(count):
        m, n = rng.randint(1, max_rank), rng.randint(1, max_rank)
        yield random_polymap(rng, ring, m, n, degree, nterms)


def _diff_pairs(rng, ring, count, max_rank, degree):
    for _ in range(count):
        m, n, p = (rng.randint(1, max_rank) for _ in range(3))
        f = random_polymap(rng, ring, m, n, degree, 3)
        g = random_polymap(rng, ring, n, p, degree, 2)
        yield f, g


# ---------------------------------------------------------------------------
# suites


def suite_functor(seed: int = 0, count: int = 50) -> SuiteReport:
    rep = SuiteReport("functor", "extended quotient and tangent functor respect composition")
    rng = random.Random(seed)
    for ring in (Q, IntegersMod(5)):

        def delta(pair):
            f, g = pair
            lhs = diffquot.extended1(compose(g, f))
            rhs = compose(diffquot.extended1(g), diffquot.extended1(f))
            return lhs.components == rhs.components, f"f = {_fmt_map(f)}\ng = {_fmt_map(g)}"

        def chain(pair):
            f, g = pair
            lhs = diffquot.tangent(compose(g, f))
            rhs = compose(diffquot.tangent(g), diffquot.tangent(f))
            return lhs.components == rhs.components, f"f = {_fmt_map(f)}\ng = {_fmt_map(g)}"

        pairs = list(_diff_pairs(rng, ring, count, 3, 3))
        rep.battery(f"Delta(g o f) = Delta g o Delta f over {ring}", pairs, delta)
        rep.battery(f"T(g o f) = Tg o Tf over {ring}", pairs, chain)

        def ident(m):
            idm = identity_map(ring, [f"x{i}" for i in range(m)])
            D = diffquot.extended1(idm)
            return D == identity_map(ring, D.variables).with_out_names(D.out_names), f"rank {m}"

        rep.battery(f"Delta id = id over {ring}", range(1, 4), ident)
    return rep


def _unit_args(rng, ring, m, k):
    while True:
        a = DiffArgs.random(rng, ring, m, k)
        t = a.time
        dens = [t[b] for b in t] + [t["10"] * (t["01"] + t["11"] * t["10"])]
        if all(invert(d) is not NotInvertible for d in dens):
            return a


def suite_closed_form(seed: int = 0, maps: int = 10, points: int = 50) -> SuiteReport:
    rep = SuiteReport("closed-form", "second-order quotient equals the closed two-term formula")
    rng = random.Random(seed)
    for f in _maps(rng, Q, maps, 2, 4):
        F = diffquot.diffk_sym(f, 2)

        def test(args, f=f, F=F):
            sym = F.evaluate(args.values_for(F))
            closed = diffquot.closed_form_diff2(f, args)
            return sym == closed, f"f = {_fmt_map(f)}\nargs = {args.assignment()}\nsymbolic = {sym}\nclosed = {closed}"

        rep.battery(f"f = {f.format()}", (_unit_args(rng, Q, f.domain_rank, 2) for _ in range(points)), test)
    return rep


def relation_sides(f: PolyMap) -> tuple[PolyMap, PolyMap]:
    """``f^[2]((x,v,0),(v,0,0),0)`` and ``2 f^[2]((x,v,0),(0,0,1),0)`` as maps in ``(x, v)``."""
    m = f.domain_rank
    ring = f.ring
    xs, vs = [f"x{i}" for i in range(m)], [f"v{i}" for i in range(m)]
    params = tuple(xs + vs)
    zero = Poly.const(ring, params, ring.zero)
    one = Poly.const(ring, params, ring.one)
    X = [Poly.var(ring, params, n) for n in xs]
    V = [Poly.var(ring, params, n) for n in vs]
    F = diffquot.diffk_sym(f, 2)
    sn = lambda bits: diffquot.space_names(m, bits)  # noqa: E731

    def side(b10, b11, t11):
        binds = dict(zip(sn("00"), X)) | dict(zip(sn("01"), V)) | dict(zip(sn("10"), b10)) | dict(zip(sn("11"), b11))
        binds |= {"t_01": zero, "t_11": t11, "t_10": zero}
        return diffquot.substitute_args(F, binds)

    left = side(V, [zero] * m, zero)
    right = side([zero] * m, [zero] * m, one)
    right = PolyMap(ring, right.variables, tuple(c.scale(ring.from_int(2)) for c in right.components))
    return left, right


def suite_relation(seed: int = 0, count: int = 20) -> SuiteReport:
    rep = SuiteReport("relation", "f^[2]((x,v,0),(v,0,0),0) = 2 f^[2]((x,v,0),(0,0,1),0)")
    rng = random.Random(seed)
    for ring in (Q, IntegersMod(3)):

        def test(f):
            left, right = relation_sides(f)
            ok = left.components == right.components
            return ok, f"f = {_fmt_map(f)}\nleft = {left.format()}\nright = {right.format()}"

        rep.battery(f"symbolic over {ring}", _maps(rng, ring, count, 2, 4), test)
    return rep


def suite_components(seed: int = 0, count: int = 4) -> SuiteReport:
    rep = SuiteReport("components", "component formula matches the iterated construction")
    rng = random.Random(seed)
    for k in (1, 2, 3):
        maps = list(_maps(rng, Q, count, 2, 3 if k < 3 else 2, 2))

        def test(f, k=k):
            D = diffquot.extendedk_sym(f, k)
            n = f.codomain_rank
            for alpha in diffquot.all_indices(k):
                direct = diffquot.component_of_delta(f, k, alpha).components
                if list(direct) != diffquot.space_part(D, n, alpha):
                    return False, f"f = {_fmt_map(f)}\nalpha = {alpha}"
            return True, ""

        rep.battery(f"k = {k}, every alpha", maps, test)
    return rep


def suite_extring_k1(seed: int = 0) -> SuiteReport:
    rep = SuiteReport("extring-k1", "order-1 scalar extension ring")
    R = scalarext.build_extension_ring(Q, 1, None)
    big = PolynomialRing(Q, ("x0", "x1", "y0", "y1", "t"))
    x0, x1, y0, y1, t = (big.generator(n) for n in big.variables)
    lift = lambda c: c.with_gens(big.variables)  # noqa: E731
    a, b = (x0, x1), (y0, y1)
    out = [big.zero, big.zero]
    for i, j, g in itertools.product(range(2), repeat=3):
        c = R.constants[i][j][g]
        if not R.coeff.is_zero(c):
            out[g] = big.add(out[g], big.mul(big.mul(a[i], b[j]), lift(c)))
    want = (x0 * y0, x0 * y1 + x1 * y0 + t * x1 * y1)
    rep.add("(x0,x1)(y0,y1) = (x0 y0, x0 y1 + x1 y0 + t x1 y1)", tuple(out) == want, f"got {[p.format() for p in out]}")
    D = scalarext.build_extension_ring(Q, 1, {"1": 0})
    eps = D.basis_vector("1")
    rep.add("t = 0: eps^2 = 0", D.algebra.is_zero(D.algebra.mul(eps, eps)), f"eps^2 = {D.algebra.mul(eps, eps)}")
    rep.add("ring axioms", scalarext.check_axioms(R).ok, "; ".join(scalarext.check_axioms(R).failures))
    return rep


def suite_extring_table(seed: int = 0) -> SuiteReport:
    rep = SuiteReport("extring-table", "order-2 structure constants")
    R = scalarext.build_extension_ring(Q, 2, None)
    for name, (got, want) in scalarext.order2_relations(R).items():
        rep.add(name, got == want, f"got {[str(c) for c in got]}, expected {[str(c) for c in want]}")
    ax = scalarext.check_axioms(R)
    rep.add("commutative, unital, associative", ax.ok, "; ".join(ax.failures))
    sq = scalarext.w11_square_finding(Q)
    rep.add("w11^2 equals the quotient-ring oracle", sq.oracle_agrees, f"table {sq.computed}, oracle {sq.quotient_oracle}")
    rep.findings.append(f"w11^2 = ({sq.computed.format()}) w11")
    rep.findings.append(
        f"t10 (t01 + t10 t11) = {sq.chain_value.format()}: {'matches' if sq.matches_chain else 'differs'}"
    )
    rep.findings.append(
        f"t01 (t10 + t01 t11) = {sq.printed_value.format()}: {'matches' if sq.matches_printed else 'differs'}"
    )
    for k in (1, 2, 3):
        tri = scalarext.triangularity_probe(scalarext.build_extension_ring(Q, k, None))
        rep.findings.append(
            f"order {k}: c_(a,b)^g = 0 unless a, b <= g: {'holds' if tri.holds else f'fails at {tri.violations[:3]}'}"
        )
    return rep


ADJUNCTION_TRIPLES = ((0, 0, 0), (1, 2, 1), (2, 1, 0), (1, 1, 2))


def suite_adjunction(seed: int = 0) -> SuiteReport:
    rep = SuiteReport("adjunction", "two-step adjunction ring equals the order-2 ring")
    S = scalarext.SYMBOLIC
    cases = [(Q, (S, S, S))] + [(IntegersMod(3), t) for t in ADJUNCTION_TRIPLES]
    for ring, t in cases:
        r = scalarext.verify_iterated_adjunction(ring, *t)
        label = "symbolic" if t[0] is S else ",".join(map(str, t))
        rep.add(f"{ring}, (t01,t10,t11) = {label}: 16 products", r.match, f"mismatches {r.mismatches}")
    return rep


def suite_scalar_extension(seed: int = 0, count: int = 20) -> SuiteReport:
    rep = SuiteReport("scalar-extension", "evaluation in the extension ring equals the space part of Delta^[k]")
    rng = random.Random(seed)
    rings = {
        1: scalarext.build_extension_ring(Q, 1, None),
        2: scalarext.build_extension_ring(Q, 2, None),
        3: scalarext.build_extension_ring(Q, 3, {b: Q.random(rng) for b in ("001", "010", "011", "100", "101", "110", "111")}),
    }
    for k, R in rings.items():
        degree = 3 if k < 3 else 2

        def test(f, R=R):
            args = [[R.coeff.from_int(rng.randint(-4, 4)) for _ in range(R.rank)] for _ in range(f.domain_rank)]
            a = scalarext.scalar_extension_apply(f, R, args)
            b = scalarext.delta_point(f, R, args)
            return a == b, f"f = {_fmt_map(f)}\nargs = {args}\nring = {a}\ndelta = {b}"

        rep.battery(f"k = {k}", _maps(rng, Q, count, 2, degree, 3), test)

    R = rings[1]
    C = R.coeff

    def functor(pair):
        f, g = pair
        args = [[C.from_int(rng.randint(-4, 4)) for _ in range(R.rank)] for _ in range(f.domain_rank)]
        lhs = scalarext.scalar_extension_apply(compose(g, f), R, args)
        rhs = scalarext.scalar_extension_apply(g, R, scalarext.scalar_extension_apply(f, R, args))
        return lhs == rhs, f"f = {_fmt_map(f)}\ng = {_fmt_map(g)}"

    rep.battery("functor property, k = 1", _diff_pairs(rng, Q, count, 2, 2), functor)
    return rep


def suite_divdiff(seed: int = 0, count: int = 100) -> SuiteReport:
    rep = SuiteReport("divdiff", "divided differences")
    rng = random.Random(seed)

    def points(k):
        while True:
            pts = [Elem(Q, Q.random(rng, 20)) for _ in range(k + 1)]
            if len({p.value for p in pts}) == k + 1:
                return pts

    def test(_):
        k = rng.randint(1, 5)
        f = random_polymap(rng, Q, 1, rng.randint(1, 2), 6, 4)
        pts = points(k)
        a, b = divdiff.divdiff_rec(f, pts), divdiff.divdiff_explicit(f, pts)
        return a == b, f"f = {_fmt_map(f)}\npoints = {pts}\nrecursive = {a}\nexplicit = {b}"

    rep.battery("explicit formula = recursion", range(count), test)

    def sym(k):
        f = random_polymap(rng, Q, 1, 1, 7, 4)
        F = divdiff.divdiff_sym(f, k)
        for perm in itertools.permutations(F.variables):
            if F.relabel(perm).components != F.components:
                return False, f"f = {_fmt_map(f)}\npermutation {perm}"
        return True, ""

    rep.battery("divdiff_sym symmetric under all permutations, k <= 4", range(1, 5), sym)
    norm = divdiff.normalization_report(6)
    rep.add("diagonal identity holds for t^d, d <= 6, with the resolved normalization", norm.derivative_over_factorial)
    rep.findings.append(f"normalization: {norm.consistent}")
    rep.findings.append(
        f"k! f^(k)(t) = f<k>(t,...,t): {'holds' if norm.factorial_times_derivative else 'fails (e.g. t^3, k = 2: 12 t vs 3 t)'}"
    )
    return rep


def suite_char2(seed: int = 0, count: int = 10) -> SuiteReport:
    rep = SuiteReport("char2", "x^2 over Z/2 and characteristic-free Taylor coefficients")
    F2 = IntegersMod(2)
    f = parse_map("x^2", F2)
    df = diffquot.differential(f)
    rep.add("df = 0", all(c.is_zero() for c in df.components), df.format())
    d1 = divdiff.divdiff_sym(f, 1)[0]
    want1 = Poly.var(F2, d1.gens, "t1") + Poly.var(F2, d1.gens, "t2")
    rep.add("f<1>(t, s) = s + t", d1 == want1, d1.format())
    d2 = divdiff.divdiff_sym(f, 2)[0]
    rep.add("f<2> = 1", d2 == Poly.const(F2, d2.gens, F2.one), d2.format())
    tay = divdiff.taylor_direct(f)
    h2 = Poly.var(F2, ("x", "h"), "h") ** 2
    rep.add("taylor: a1 = 0, a2 = h^2", tay[1][0].is_zero() and tay[2][0] == h2, f"{tay[1]}, {tay[2]}")
    rep.add("a2 = f<2>(x,x,x) h^2", divdiff.taylor_from_divdiff(f, 2)[0] == h2)
    ok, pairs = divdiff.curve_link(f)
    rep.add(
        "f^[2]((x,h,t),(0,0,1),s) = gamma<2>(0,t,s)",
        ok,
        "\n".join(f"left {a.format()}, right {b.format()}" for a, b in pairs),
    )
    rng = random.Random(seed)
    for ring in (Q, IntegersMod(2), IntegersMod(3)):

        def slopes(g):
            a1, a2 = divdiff.slope_coefficients(g)
            t = divdiff.taylor_direct(g, 2)
            ok = a1.components == t[1].components and a2.components == t[2].components
            return ok, f"f = {_fmt_map(g)}"

        rep.battery(f"slope coefficients = Taylor coefficients over {ring}", _maps(rng, ring, count, 2, 4), slopes)
    cubic = parse_map("x^3", Q)
    literal, pairs = divdiff.curve_link(cubic)
    shifted, _ = divdiff.curve_link(cubic, shifted=True)
    a, b = pairs[0]
    rep.findings.append(
        f"x^3 over Q: f^[2]((x,h,t),(0,0,1),s) = {a.format()}, gamma<2>(0,t,s) = {b.format()} "
        f"({'equal' if literal else 'differ'}); gamma<2>(0,t,t+s) {'matches' if shifted else 'differs'}"
    )
    return rep


AUT_CASES = (("Z/2", 1, "0", 1), ("Z/3", 1, "0", 2), ("Z/3", 1, "1", 2))


def suite_automorphisms(seed: int = 0) -> SuiteReport:
    rep = SuiteReport("automorphisms", "exhaustive automorphism counts")
    for ring, k, t, want in AUT_CASES:
        R = scalarext.build_extension_ring(ring, k, t)
        res = scalarext.automorphism_search(R)
        rep.add(f"|Aut| over {ring}, k = {k}, t = {t} is {want}", res.order == want, f"found {res.order}: {res.matrices}")
    return rep


def suite_carnot(seed: int = 0, count: int = 20) -> SuiteReport:
    rep = SuiteReport("carnot", "Heisenberg group: dilations, group law and Pansu quotient")
    rng = random.Random(seed)
    H = carnot.heisenberg(Q)
    rv = lambda A: tuple(Q.random(rng, 6) for _ in range(A.dim))  # noqa: E731
    Rt = PolynomialRing(Q, ("t",))
    Ht = H.with_base(Rt)
    t = Rt.generator("t")

    def endo(_):
        u, w = Ht.vector(rv(H)), Ht.vector(rv(H))
        lhs = Ht.bracket(carnot.dilation(Ht, t, u), carnot.dilation(Ht, t, w))
        rhs = carnot.dilation(Ht, t, Ht.bracket(u, w))
        return lhs == rhs, f"u = {u}, w = {w}"

    rep.battery("dilation is a bracket endomorphism (symbolic t)", range(count), endo)

    def compose_dil(_):
        s, tt, v = Q.random(rng), Q.random(rng), rv(H)
        lhs = carnot.dilation(H, s, carnot.dilation(H, tt, v))
        return lhs == carnot.dilation(H, Q.mul(s, tt), v), f"s = {s}, t = {tt}, v = {v}"

    rep.battery("dilation_s o dilation_t = dilation_st", range(count), compose_dil)

    def assoc(_):
        u, v, w = rv(H), rv(H), rv(H)
        lhs = carnot.bch_product(H, carnot.bch_product(H, u, v), w)
        rhs = carnot.bch_product(H, u, carnot.bch_product(H, v, w))
        return lhs == rhs and carnot.bch_product(H, u, H.zero) == H.vector(u), f"{u}, {v}, {w}"

    rep.battery("group law associative with unit 0", range(count), assoc)

    def nonzero():
        while True:
            t = Q.random(rng)
            if t:
                return t

    idm = identity_map(Q, ("x", "y", "z"))

    def pansu_id(_):
        x, v, tt = rv(H), rv(H), nonzero()
        return carnot.pansu_diff1(idm, H, H, x, v, tt) == H.vector(v), f"x = {x}, v = {v}, t = {tt}"

    rep.battery("Pansu quotient of the identity is v", range(count), pansu_id)

    A = carnot.abelian(Q, 2)
    f = parse_map("(x0^2*x1 - 3*x1, x0*x1^2 + x0)", Q)

    def abelian_case(_):
        x, v, tt = rv(A), rv(A), nonzero()
        lhs = carnot.pansu_diff1(f, A, A, x, v, tt)
        rhs = tuple(e.value for e in diffquot.diff1_eval(f, [Elem(Q, c) for c in x], [Elem(Q, c) for c in v], Elem(Q, tt)))
        return lhs == rhs, f"x = {x}, v = {v}, t = {tt}"

    rep.battery("abelian case is the ordinary difference quotient", range(count), abelian_case)

    def hom(_):
        a, b, c, d = (rng.randint(-4, 4) for _ in range(4))
        g = carnot.graded_heisenberg_map(Q, a, b, c, d)
        x, v, tt = rv(H), rv(H), nonzero()
        got = carnot.pansu_diff1(g, H, H, x, v, tt)
        want = tuple(p.evaluate(list(v)) for p in g.components)
        return got == want, f"g = {_fmt_map(g)}, x = {x}, v = {v}, t = {tt}"

    rep.battery("graded homomorphisms have Pansu quotient f(v)", range(count), hom)
    return rep


def suite_integrals(seed: int = 0, count: int = 50) -> SuiteReport:
    rep = SuiteReport("integrals", "integral formulas over Q")
    rng = random.Random(seed)

    def seg(f):
        c = analytic.check_integral_diff1(f)
        return c.ok, c.witness()

    rep.battery("f^[1] = int_0^1 df(x + s t v) v ds", _maps(rng, Q, count, 2, 5), seg)
    for k in range(1, 6):
        names = analytic.simplex_names(k)
        vol = analytic.exact_simplex_integral(Poly.const(Q, names, Q.one), names).constant_term()
        rep.add(f"volume of simplex_{k} = 1/{factorial(k)}", vol * factorial(k) == 1, f"got {vol}")

    def hg(case):
        d, k = case
        c = analytic.check_simplex_divdiff(divdiff.monomial_curve(Q, d), k)
        return c.ok, f"t^{d}, k = {k}: {c.witness()}"

    rep.battery("f<k> = simplex integral of f^(k) for t^d, d <= 6, k <= 4", itertools.product(range(7), range(1, 5)), hg)
    rep.findings.append(f"normalization applied: {analytic.NORMALIZATION}")
    return rep


def suite_qdeform(seed: int = 0, count: int = 20) -> SuiteReport:
    rep = SuiteReport("qdeform", "q-deformation at t0 = 1")
    rng = random.Random(seed)
    for k in (1, 2):

        def test(f, k=k):
            try:
                G = diffquot.q_deform(f, k)
                diffquot.q_deform_delta(f, k)
            except diffquot.ExactDivisionFailed as exc:
                return False, f"f = {_fmt_map(f)}: {exc}"
            t0 = diffquot.q_time_name(k)
            at1 = diffquot.substitute_args(G, {t0: 1})
            F = diffquot.diffk_sym(f, k)
            same = tuple(c.with_gens(F.variables) for c in at1.components) == F.components
            return same, f"f = {_fmt_map(f)}"

        rep.battery(f"k = {k}: exact divisions succeed and t0 = 1 recovers f^[{k}]", _maps(rng, Q, count, 2, 4), test)
    return rep


SUITES: dict[str, tuple[int, Callable[..., SuiteReport]]] = {
    "functor": (1, suite_functor),
    "closed-form": (2, suite_closed_form),
    "relation": (3, suite_relation),
    "components": (4, suite_components),
    "extring-k1": (5, suite_extring_k1),
    "extring-table": (6, suite_extring_table),
    "adjunction": (7, suite_adjunction),
    "scalar-extension": (8, suite_scalar_extension),
    "divdiff": (9, suite_divdiff),
    "char2": (10, suite_char2),
    "automorphisms": (11, suite_automorphisms),
    "carnot": (12, suite_carnot),
    "integrals": (13, suite_integrals),
    "qdeform": (14, suite_qdeform),
}


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name][1](seed)


def run_all(seed: int = 0) -> list[SuiteReport]:
    return [fn(seed) for _, fn in SUITES.values()]
