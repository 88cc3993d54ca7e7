import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopecalc import IntegersMod, PolyMap, Rationals, compose, identity_map, parse_map, parse_poly
from slopecalc.diffquot import (
    DiffArgs,
    MultiIndex,
    NonInvertibleTime,
    ResourceLimit,
    all_indices,
    bary_diff1_eval,
    bary_diff1_sym,
    closed_form_diff2,
    component_of_delta,
    diff1_eval,
    diff1_sym,
    diffk_eval,
    diffk_sym,
    differential,
    domain_variables,
    extended1,
    extendedk_sym,
    q_deform,
    q_deform_delta,
    space_part,
    substitute_args,
    tangent,
)

from strategies import polymaps

Q = Rationals()
F2 = IntegersMod(2)


def sq(ring=Q):
    return parse_map("x^2", ring, ("x",))


def test_multi_indices():
    assert [a.bits for a in all_indices(2)] == ["00", "01", "10", "11"]
    a = MultiIndex("101")
    assert a.depth == 2 and MultiIndex("001").issubset(a) and not MultiIndex("010").issubset(a)


def test_variable_naming():
    assert domain_variables(1, 1) == ("x_0", "x_1", "t_1")
    assert domain_variables(2, 1) == ("x0_0", "x1_0", "x0_1", "x1_1", "t_1")
    assert len(domain_variables(1, 3)) == 2**4 - 1


def test_diff1_eval_examples():
    assert diff1_eval(sq(), [Q(1)], [Q(1)], Q(1))[0] == 3
    ident = identity_map(Q, ("a", "b"))
    assert diff1_eval(ident, [Q(1), Q(2)], [Q(5), Q(7)], Q(3)) == [Q(5), Q(7)]
    const = parse_map("4", Q, ("x",))
    assert diff1_eval(const, [Q(9)], [Q(2)], Q(5))[0] == 0


def test_diff1_eval_needs_unit_time():
    with pytest.raises(NonInvertibleTime):
        diff1_eval(sq(), [Q(1)], [Q(1)], Q(0))
    Z6 = IntegersMod(6)
    with pytest.raises(NonInvertibleTime):
        diff1_eval(sq(Z6), [Z6(1)], [Z6(1)], Z6(2))


def test_diff1_sym_examples():
    assert diff1_sym(sq()).format() == "2*x_0*x_1 + t_1*x_1^2"
    assert diff1_sym(sq(F2)).format() == "t_1*x_1^2"
    ident = identity_map(Q, ("a", "b"))
    F = diff1_sym(ident)
    assert [c.format() for c in F.components] == ["x0_1", "x1_1"]


def test_differential_and_tangent():
    assert differential(sq()).format() == "2*x_0*x_1"
    assert differential(sq(F2))[0].is_zero()
    T = tangent(identity_map(Q, ("a",)))
    assert T == identity_map(Q, T.variables)


def test_extended1():
    D = extended1(sq())
    assert [c.format() for c in D.components] == ["x_0^2", "2*x_0*x_1 + t_1*x_1^2", "t_1"]
    D = extended1(parse_map("3", Q, ("x",)))
    assert [c.format() for c in D.components] == ["3", "0", "t_1"]
    D = extended1(identity_map(Q, ("x",)))
    assert D == identity_map(Q, D.variables)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_delta_of_identity_is_identity(k):
    D = extendedk_sym(identity_map(Q, ("x", "y")), k)
    assert D == identity_map(Q, D.variables)


def test_seven_components_at_order_two():
    f = parse_map("x^3", Q, ("x",))
    D = extendedk_sym(f, 2)
    assert D.codomain_rank == 7
    assert D.out_names == ("y_00", "y_01", "t_01", "y_10", "y_11", "t_11", "t_10")
    for a in all_indices(2):
        assert space_part(D, 1, a) == list(component_of_delta(f, 2, a).components)
    F1 = diff1_sym(f)
    expected = F1.substitute(
        {"x_0": F1.components[0].var(Q, D.variables, "x_00"),
         "x_1": F1.components[0].var(Q, D.variables, "x_01"),
         "t_1": F1.components[0].var(Q, D.variables, "t_01")},
        D.variables,
    )
    assert space_part(D, 1, "01") == list(expected.components)


def test_maximal_depth_component_is_the_quotient():
    D = extendedk_sym(sq(), 3)
    assert space_part(D, 1, "111") == list(diffk_sym(sq(), 3).components)


@pytest.mark.parametrize("k", [2, 3])
def test_components_match_direct_construction(k):
    f = random_map(k)
    D = extendedk_sym(f, k)
    for a in all_indices(k):
        assert space_part(D, f.codomain_rank, a) == list(component_of_delta(f, k, a).components)


def random_map(seed):
    from slopecalc.poly import random_polymap

    return random_polymap(random.Random(seed), Q, 2, 2, degree=3)


def test_closed_form_matches_symbolic_quotient():
    rng = random.Random(11)
    f = parse_map("x^3", Q, ("x",))
    F = diffk_sym(f, 2)
    checked = 0
    while checked < 50:
        args = DiffArgs.random(rng, Q, 1, 2, size=9)
        t = args.time
        if any(v.is_zero() for v in (t["01"], t["10"], t["01"] + t["11"] * t["10"])):
            continue
        assert closed_form_diff2(f, args) == F.evaluate(args.values_for(F))
        checked += 1


def test_order_two_direction_relation():
    f = parse_map("x^4 + 2*x^3 - x", Q, ("x",))
    F = diffk_sym(f, 2)
    ring = F.ring
    x = F.components[0].var(ring, ("x", "v"), "x")
    v = F.components[0].var(ring, ("x", "v"), "v")

    zero = x - x

    def at(x10, t11):
        binds = {"x_00": x, "x_01": v, "t_01": 0, "x_10": x10, "x_11": zero, "t_11": t11, "t_10": 0}
        return substitute_args(F, binds)[0].with_gens(("x", "v"))

    assert at(v, 0) == at(zero, 1) * 2


def test_nested_evaluation_matches_symbolic():
    rng = random.Random(3)
    Z7 = IntegersMod(7)
    f = parse_map("(x0^2*x1 + 3, x1^3)", Z7, ("x0", "x1"))
    F = diffk_sym(f, 2)
    done = 0
    while done < 20:
        args = DiffArgs.random(rng, Z7, 2, 2)
        try:
            got = diffk_eval(f, 2, args)
        except NonInvertibleTime:
            continue
        assert got == F.evaluate(args.values_for(F))
        done += 1


def test_q_deform_examples():
    assert q_deform(sq(), 1).format() == "2*x_0*x_1 + t_0^2*t_1*x_1^2"
    F = q_deform(parse_map("x^3 - x", Q, ("x",)), 2)
    assert substitute_args(F, {"t_00": 1}).components == diffk_sym(parse_map("x^3 - x", Q, ("x",)), 2).components
    ident = identity_map(Q, ("x",))
    assert q_deform(ident, 2)[0].format() == "x_11"


def test_q_deform_delta_at_one():
    f = parse_map("x^3", Q, ("x",))
    Dq = q_deform_delta(f, 2)
    D = extendedk_sym(f, 2)
    assert substitute_args(Dq, {"t_00": 1}).components == D.components


def test_barycentric_quotient():
    B = bary_diff1_sym(identity_map(Q, ("z",)))
    assert B.format() == "x - y"
    B = bary_diff1_sym(parse_map("7", Q, ("z",)))
    assert B[0].is_zero()
    B = bary_diff1_sym(sq())
    vals = {"x": 1, "y": 0}
    assert substitute_args(B, vals)[0] == parse_poly("s + t", Q, ("s", "t"))


def test_barycentric_eval_matches_symbolic():
    f = parse_map("x^3 + x", Q, ("x",))
    B = bary_diff1_sym(f)
    x, y, s, t = Q(2), Q(Fraction(1, 3)), Q(5), Q(-1)
    assert bary_diff1_eval(f, [x], [y], s, t) == B.evaluate([x, y, s, t])


def test_order_limit(monkeypatch):
    monkeypatch.setenv("SLOPECALC_MAX_K", "2")
    with pytest.raises(ResourceLimit):
        diffk_sym(sq(), 3)


@given(polymaps(), st.data())
def test_differential_is_linear(f, data):
    df = differential(f)
    m = f.domain_rank
    ring = f.ring
    names = tuple(f"x{i}_0" for i in range(m)) if m > 1 else ("x_0",)
    dirs = tuple(f"x{i}_1" for i in range(m)) if m > 1 else ("x_1",)
    gens = names + tuple(f"v{i}" for i in range(m)) + tuple(f"w{i}" for i in range(m)) + ("c",)
    P = lambda n: df.components[0].var(ring, gens, n)  # noqa: E731

    def at(vec):
        return [c.substitute(dict(zip(dirs, vec))).with_gens(gens) for c in df.components]

    v = [P(f"v{i}") for i in range(m)]
    w = [P(f"w{i}") for i in range(m)]
    c = P("c")
    assert at([a + b for a, b in zip(v, w)]) == [a + b for a, b in zip(at(v), at(w))]
    assert at([c * a for a in v]) == [c * a for a in at(v)]


@given(polymaps(max_degree=3, max_terms=3), st.data())
def test_symbolic_quotient_matches_black_box(f, data):
    ring = f.ring
    F = diff1_sym(f)
    pts = [ring(data.draw(st.integers(-4, 4))) for _ in range(2 * f.domain_rank)]
    t = ring(data.draw(st.integers(1, 4)))
    x, v = pts[: f.domain_rank], pts[f.domain_rank :]
    try:
        expected = diff1_eval(f, x, v, t)
    except NonInvertibleTime:
        return
    assert F.evaluate(x + v + [t]) == expected


@given(st.data())
def test_chain_rule_for_extended_maps(data):
    ring = data.draw(st.sampled_from([Q, IntegersMod(3)]))
    f = data.draw(polymaps(ring, max_degree=2, max_terms=2))
    g_in = tuple(f"x{i}" for i in range(f.codomain_rank))
    from strategies import polys

    g = PolyMap(ring, g_in, (data.draw(polys(ring, g_in, 2, 2)),))
    k = data.draw(st.integers(1, 2))
    Dg, Df = extendedk_sym(g, k), extendedk_sym(f, k)
    Dgf = extendedk_sym(compose(g, f), k)
    assert compose(Dg, Df).components == Dgf.components
