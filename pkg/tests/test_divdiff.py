import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopecalc import IntegersMod, PolyMap, Rationals, parse_map, parse_poly
from slopecalc.divdiff import (
    NonInvertibleDenominator,
    curve_link,
    diagonal,
    diagonal_identity_holds,
    divdiff_explicit,
    divdiff_rec,
    divdiff_sym,
    monomial_curve,
    normalization_report,
    slope_coefficients,
    taylor_direct,
    taylor_from_divdiff,
)
from slopecalc.poly import random_polymap

from strategies import curves

Q = Rationals()
F2 = IntegersMod(2)


def curve(text, ring=Q):
    return parse_map(text, ring, ("u",))


def test_first_order_of_square():
    assert divdiff_sym(curve("u^2"), 1)[0] == parse_poly("t1 + t2", Q, ("t1", "t2"))
    assert divdiff_rec(curve("u^2"), [Q(3), Q(5)])[0] == 8


def test_second_order_of_cube():
    assert divdiff_sym(curve("u^3"), 2)[0] == parse_poly("t1 + t2 + t3", Q, ("t1", "t2", "t3"))
    pts = [Q(1), Q(Fraction(1, 2)), Q(-4)]
    assert divdiff_explicit(curve("u^3"), pts)[0] == sum(p.value for p in pts)


def test_affine_second_difference_vanishes():
    pts = [Q(0), Q(2), Q(7)]
    assert divdiff_rec(curve("3*u + 1"), pts)[0].is_zero()
    assert divdiff_sym(curve("3*u + 1"), 2)[0].is_zero()


def test_square_over_f2_second_order_is_one():
    assert divdiff_sym(curve("u^2", F2), 2)[0].format() == "1"


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_leading_difference_of_monomial_is_one(k):
    f = monomial_curve(Q, k)
    assert divdiff_sym(f, k)[0].format() == "1"
    pts = [Q(i * i + 1) for i in range(k + 1)]
    assert divdiff_explicit(f, pts)[0] == 1 == divdiff_rec(f, pts)[0]


def test_degree_below_order_vanishes():
    assert divdiff_sym(curve("u^2 - u"), 3)[0].is_zero()


def test_repeated_points_need_units():
    with pytest.raises(NonInvertibleDenominator):
        divdiff_explicit(curve("u^2"), [Q(1), Q(1)])
    Z6 = IntegersMod(6)
    with pytest.raises(NonInvertibleDenominator):
        divdiff_rec(curve("u^3", Z6), [Z6(0), Z6(2)])


def test_symbolic_form_is_defined_on_diagonal():
    F = divdiff_sym(curve("u^3"), 1)
    assert diagonal(F)[0] == parse_poly("3*t^2", Q, ("t",))


def test_normalization_is_derivative_over_factorial():
    rep = normalization_report(5)
    assert rep.derivative_over_factorial
    assert not rep.factorial_times_derivative
    # cube at order 2: diagonal is 3t, while 2! f'' would be 12t
    assert diagonal(divdiff_sym(curve("u^3"), 2))[0] == parse_poly("3*t", Q, ("t",))


def test_taylor_examples():
    a = taylor_direct(parse_map("x^2", F2, ("x",)))
    assert a[1][0].is_zero() and a[2][0].format() == "h^2"
    a = taylor_direct(parse_map("x^3", Q, ("x",)))
    assert [a[j][0].format() for j in (1, 2, 3)] == ["3*h*x^2", "3*h^2*x", "h^3"]
    a = taylor_direct(parse_map("2*x + 5", Q, ("x",)), 3)
    assert a[1][0].format() == "2*h" and a[2][0].is_zero()


def test_slopes_reproduce_taylor_coefficients():
    for ring in (Q, F2, IntegersMod(3)):
        f = parse_map("x^3 + x^2", ring, ("x",))
        a1, a2 = slope_coefficients(f)
        direct = taylor_direct(f, 2)
        assert a1 == direct[1] and a2 == direct[2]
    a1, a2 = slope_coefficients(parse_map("x", Q, ("x",)))
    assert a1[0].format() == "h" and a2[0].is_zero()


def test_curve_link_literal_form_holds_for_quadratics():
    ok, _ = curve_link(parse_map("x^2", F2, ("x",)))
    assert ok
    ok, _ = curve_link(parse_map("3*x^2 - x + 1", Q, ("x",)))
    assert ok


def test_curve_link_literal_form_fails_for_cubic():
    ok, pairs = curve_link(parse_map("x^3", Q, ("x",)))
    assert not ok
    left, right = pairs[0]
    params = left.gens
    assert left == parse_poly("3*h^2*x + 2*h^3*t + h^3*s", Q, params)
    assert right == parse_poly("3*h^2*x + h^3*t + h^3*s", Q, params)


def test_curve_link_shifted_form_holds_in_general():
    rng = random.Random(5)
    for ring in (Q, F2, IntegersMod(5)):
        for _ in range(4):
            f = random_polymap(rng, ring, 2, 2, degree=4)
            ok, _ = curve_link(f, shifted=True)
            assert ok


def test_taylor_from_divided_differences_over_q():
    f = parse_map("x^4 - 2*x", Q, ("x",))
    direct = taylor_direct(f, 4)
    for k in range(1, 5):
        assert taylor_from_divdiff(f, k)[0] == direct[k][0].with_gens(("x", "h"))


@given(curves(), st.data())
def test_divided_differences_are_symmetric(f, data):
    F = divdiff_sym(f, 2)
    perm = data.draw(st.permutations(F.variables))
    assert F.relabel(perm).components == F.components


@given(curves(max_degree=5), st.data())
def test_recursion_explicit_and_symbolic_agree(f, data):
    k = data.draw(st.integers(1, 3))
    pts = data.draw(st.lists(st.integers(-20, 20), min_size=k + 1, max_size=k + 1, unique=True))
    pts = [Q(p) for p in pts]
    rec = divdiff_rec(f, pts)
    assert rec == divdiff_explicit(f, pts)
    assert rec == divdiff_sym(f, k).evaluate(pts)


@given(curves(max_degree=6), st.integers(1, 4))
def test_diagonal_identity(f, k):
    assert diagonal_identity_holds(f, k)
