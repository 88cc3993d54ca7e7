from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopecalc import (
    IntegersMod,
    NotDivisible,
    Poly,
    PolyMap,
    Rationals,
    compose,
    evaluate,
    exact_divide,
    exact_divide_diff,
    identity_map,
    parse_map,
    parse_poly,
)
from slopecalc.poly import PolyError, product_map
from slopecalc.rings import RingMismatch

from strategies import polymaps, polys

Q = Rationals()
Z5 = IntegersMod(5)


def test_evaluate_product_mod5():
    f = parse_map("x*y", Z5, ("x", "y"))
    assert [e.value for e in evaluate(f, [3, 4])] == [2]


def test_evaluate_rejects_wrong_rank_and_ring():
    f = parse_map("x*y", Z5, ("x", "y"))
    with pytest.raises(PolyError):
        evaluate(f, [1])
    with pytest.raises(RingMismatch):
        evaluate(f, [Q(1), Q(2)])


def test_compose_example():
    g = parse_map("x^2", Q, ("x",))
    f = parse_map("x + 1", Q, ("x",))
    assert compose(g, f) == parse_map("x^2 + 2*x + 1", Q, ("x",))


def test_compose_rank_mismatch():
    with pytest.raises(PolyError):
        compose(parse_map("x*y", Q, ("x", "y")), parse_map("x", Q, ("x",)))


def test_exact_divide():
    p = parse_poly("x*y + x^2", Q, ("x", "y"))
    assert exact_divide(p, "x") == parse_poly("y + x", Q, ("x", "y"))
    assert exact_divide(parse_poly("x + 1", Q, ("x",)), "x") is NotDivisible


def test_exact_divide_diff():
    p = parse_poly("u^3 - w^3", Q, ("u", "w"))
    assert exact_divide_diff(p, "u", "w") == parse_poly("u^2 + u*w + w^2", Q, ("u", "w"))
    assert exact_divide_diff(parse_poly("u + 1", Q, ("u", "w")), "u", "w") is NotDivisible


def test_exact_divide_diff_over_z6():
    R = IntegersMod(6)
    p = parse_poly("u^4 - w^4 + 5*u*w - 5*w^2", R, ("u", "w"))
    q = exact_divide_diff(p, "u", "w")
    assert q * (parse_poly("u - w", R, ("u", "w"))) == p


def test_poly_equality_ignores_generator_order():
    a = parse_poly("x + 2*y", Q, ("x", "y"))
    b = parse_poly("x + 2*y", Q, ("y", "x", "z"))
    assert a == b and hash(a) == hash(b)


def test_modular_coefficients_are_reduced():
    p = parse_poly("6*x + 7", Z5, ("x",))
    assert p.format() == "x + 2"
    assert parse_poly("5*x", Z5, ("x",)).is_zero()


def test_formal_partial_derivative():
    p = parse_poly("x^3*y + 2*y^2", Q, ("x", "y"))
    assert p.diff("x") == parse_poly("3*x^2*y", Q, ("x", "y"))
    assert p.diff("y") == parse_poly("x^3 + 4*y", Q, ("x", "y"))


def test_product_map():
    f = parse_map("x^2", Q, ("x",))
    g = parse_map("y + 1", Q, ("y",))
    h = product_map(f, g)
    assert [e.value for e in h.evaluate([3, 4])] == [9, 5]
    with pytest.raises(PolyError):
        product_map(f, f)


def test_duplicate_variables_rejected():
    with pytest.raises(PolyError):
        PolyMap(Q, ("x", "x"), ())


@given(polys(Q, ("x", "y")), polys(Q, ("x", "y")), polys(Q, ("x", "y")))
def test_polynomial_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == a.zero_like()


@given(polys(Q, ("x", "y")), st.integers(-5, 5), st.integers(-5, 5))
def test_evaluation_is_a_homomorphism(p, a, b):
    q = p * p + p
    pa = p.evaluate([Fraction(a), Fraction(b)])
    assert q.evaluate([Fraction(a), Fraction(b)]) == pa * pa + pa


@given(polys(Q, ("u", "w")), polys(Q, ("u", "w")))
def test_exact_divide_diff_recovers_factor(q, extra):
    d = parse_poly("u - w", Q, ("u", "w"))
    assert exact_divide_diff(q * d, "u", "w") == q


@given(polys(Z5, ("x", "y")))
def test_exact_divide_recovers_factor(q):
    x = Poly.var(Z5, ("x", "y"), "x")
    assert exact_divide(q * x, "x") == q


@given(st.data())
def test_compose_is_associative(data):
    ring = data.draw(st.sampled_from([Q, Z5]))
    f = data.draw(polymaps(ring, max_degree=2, max_terms=2))
    g_in = tuple(f"x{i}" for i in range(f.codomain_rank))
    n = data.draw(st.integers(1, 2))
    g = PolyMap(ring, g_in, tuple(data.draw(polys(ring, g_in, 2, 2)) for _ in range(n)))
    h_in = tuple(f"x{i}" for i in range(n))
    h = PolyMap(ring, h_in, (data.draw(polys(ring, h_in, 2, 2)),))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(f, identity_map(ring, f.variables)) == f


@given(polymaps(), st.data())
def test_compose_agrees_with_pointwise_evaluation(f, data):
    ring = f.ring
    g = identity_map(ring, tuple(f"x{i}" for i in range(f.codomain_rank)))
    point = [data.draw(st.integers(0, 4)) for _ in range(f.domain_rank)]
    assert compose(g, f).evaluate(point) == f.evaluate(point)
