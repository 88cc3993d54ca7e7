import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given

from slopecalc import IntegersMod, Rationals, parse_map, parse_poly
from slopecalc.analytic import (
    check_integral_diff1,
    check_simplex_divdiff,
    exact_segment_integral,
    exact_simplex_integral,
    integral_diff1,
)
from slopecalc.poly import random_polymap
from slopecalc.rings import RingError

from strategies import curves, polymaps

Q = Rationals()


def const(p):
    return p.constant_term()


def test_segment_integrals():
    assert const(exact_segment_integral(parse_poly("1", Q, ("s",)))) == 1
    assert const(exact_segment_integral(parse_poly("s^2", Q, ("s",)))) == Fraction(1, 3)
    p = parse_poly("(2*x + 2*s*t*v)*v", Q, ("x", "v", "t", "s"))
    assert exact_segment_integral(p) == parse_poly("2*x*v + t*v^2", Q, ("x", "v", "t"))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_simplex_volume(k):
    names = tuple(f"l{i}" for i in range(1, k + 1))
    assert const(exact_simplex_integral(parse_poly("1", Q, names))) == Fraction(1, factorial(k))


def test_simplex_moments():
    assert const(exact_simplex_integral(parse_poly("l1", Q, ("l1",)))) == Fraction(1, 2)
    assert const(exact_simplex_integral(parse_poly("l1", Q, ("l1", "l2")))) == Fraction(1, 6)


def test_integral_form_of_first_quotient():
    f = parse_map("x^2", Q, ("x",))
    assert integral_diff1(f).format() == "2*x_0*x_1 + t_1*x_1^2"
    lin = parse_map("3*x - y", Q, ("x", "y"))
    chk = check_integral_diff1(lin)
    assert chk.ok and chk.right[0].format() == "3*x0_1 - x1_1"


def test_integral_form_on_random_maps():
    rng = random.Random(4)
    for _ in range(6):
        assert check_integral_diff1(random_polymap(rng, Q, 2, 2, degree=5)).ok


def test_simplex_form_of_divided_differences():
    f = parse_map("u^3", Q, ("u",))
    chk = check_simplex_divdiff(f, 2)
    assert chk.ok
    assert chk.left[0] == parse_poly("t1 + t2 + t3", Q, ("t1", "t2", "t3"))
    for k in (1, 2, 3):
        mono = parse_map(f"u^{k}", Q, ("u",))
        assert check_simplex_divdiff(mono, k).left[0].format() == "1"
    assert check_simplex_divdiff(parse_map("u^2 + 1", Q, ("u",)), 3).right[0].is_zero()


def test_needs_rational_coefficients():
    with pytest.raises(RingError):
        integral_diff1(parse_map("x^2", IntegersMod(5), ("x",)))


@given(polymaps(Q, max_degree=4))
def test_integral_identity_property(f):
    assert check_integral_diff1(f).ok


@given(curves(Q, max_degree=5))
def test_simplex_identity_property(f):
    for k in (1, 2, 3):
        assert check_simplex_divdiff(f, k).ok
