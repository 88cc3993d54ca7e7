from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopecalc import (
    Elem,
    IntegersMod,
    NotInvertible,
    PolynomialRing,
    Rationals,
    StructureConstantAlgebra,
    invert,
    make_ring,
    parse_ring,
)
from slopecalc.rings import RingError, RingMismatch, determinant, matrix_inverse

from strategies import ring_and_elements

Q = Rationals()


def test_small_rings():
    F2 = make_ring(IntegersMod(2))
    assert list(F2.elements()) == [0, 1]
    assert Q.one_elem + Q.one_elem == Q(Fraction(2))


def test_polynomial_coefficient_ring():
    R = make_ring(PolynomialRing(Q, ("t01", "t10", "t11")))
    assert R.generator_names() == ("t01", "t10", "t11")
    assert parse_ring("Q[t01,t10,t11]") == R


@pytest.mark.parametrize("bad", [lambda: IntegersMod(1), lambda: IntegersMod(0), lambda: PolynomialRing(Q, ("t", "t"))])
def test_invalid_descriptors(bad):
    with pytest.raises(RingError):
        bad()


def test_generator_clash_rejected():
    with pytest.raises(RingError):
        PolynomialRing(PolynomialRing(Q, ("t",)), ("t",))


def test_arith_examples():
    assert Q(Fraction(2, 3)) + Q(Fraction(1, 3)) == 1
    Z6 = IntegersMod(6)
    assert (Z6(2) * Z6(3)).is_zero()
    Qt = PolynomialRing(Q, ("t",))
    t = Qt.parse("t")
    assert t * t == Qt.parse("t^2")


def test_invert_examples():
    assert invert(Q(Fraction(2, 3))) == Q(Fraction(3, 2))
    Z6 = IntegersMod(6)
    assert invert(Z6(5)) == Z6(5)
    assert invert(Z6(2)) is NotInvertible
    assert not NotInvertible


def test_invert_mod_n_matches_exhaustive_search():
    for n in range(2, 16):
        Z = IntegersMod(n)
        for a in range(n):
            brute = [b for b in range(n) if a * b % n == 1]
            got = invert(Z(a))
            assert (got is NotInvertible) == (not brute)
            if brute:
                assert got.value == brute[0]


def test_polynomial_units_are_unit_plus_nilpotent():
    R = PolynomialRing(IntegersMod(4), ("t",))
    u = R.parse("1 + 2*t")
    inv = invert(u)
    assert inv is not NotInvertible and u * inv == R.one_elem
    assert invert(R.parse("1 + t")) is NotInvertible
    assert invert(PolynomialRing(Q, ("t",)).parse("t")) is NotInvertible


def test_mixed_rings_fail_fast():
    with pytest.raises(RingMismatch):
        IntegersMod(5)(1) + IntegersMod(7)(1)


def test_element_printing():
    assert str(Q(Fraction(3, 2))) == "3/2"
    assert str(IntegersMod(6)(5)) == "5 mod 6"
    R = parse_ring("Q[t01,t10]")
    assert str(R.parse("2*t01*t10 + 1")) == "2*t01*t10 + 1"


@pytest.mark.parametrize(
    "ring,text",
    [("Q", "3/2"), ("Q", "-7"), ("Z/6", "5 mod 6"), ("Q[t01,t10]", "2*t01*t10 + 1"), ("Z/5[a]", "3*a^2 + a + 4")],
)
def test_parse_print_roundtrip(ring, text):
    R = parse_ring(ring)
    e = R.parse(text)
    assert str(e) == text
    assert R.parse(str(e)) == e


def test_parse_ring_errors_report_position():
    with pytest.raises(RingError, match="position"):
        parse_ring("R")
    with pytest.raises(RingError, match="position"):
        parse_ring("Q[t")


def test_structure_constant_algebra_dual_numbers():
    # 1, e with e^2 = 0
    table = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    D = StructureConstantAlgebra(Q, 2, [[[Fraction(c) for c in row] for row in p] for p in table])
    e = D.parse("[0, 1]")
    assert (e * e).is_zero()
    assert invert(D.parse("[2, 5]")) * D.parse("[2, 5]") == D.one_elem
    assert invert(e) is NotInvertible


def test_structure_constant_algebra_requires_unit():
    with pytest.raises(RingError):
        StructureConstantAlgebra(Q, 1, [[[Fraction(2)]]])


def test_determinant_and_inverse_over_z6():
    Z6 = IntegersMod(6)
    m = [[1, 2], [3, 5]]
    assert determinant(Z6, m) == (5 - 6) % 6
    inv = matrix_inverse(Z6, m)
    prod = [[sum(m[i][k] * inv[k][j] for k in range(2)) % 6 for j in range(2)] for i in range(2)]
    assert prod == [[1, 0], [0, 1]]
    assert matrix_inverse(Z6, [[2, 0], [0, 1]]) is NotInvertible


def test_determinant_matches_leibniz_formula():
    import itertools

    m = [[Fraction(i * 3 + j * j - 2 * i * j + 1) for j in range(4)] for i in range(4)]

    def sign(p):
        s = 1
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                if p[i] > p[j]:
                    s = -s
        return s

    leibniz = sum(sign(p) * m[0][p[0]] * m[1][p[1]] * m[2][p[2]] * m[3][p[3]] for p in itertools.permutations(range(4)))
    assert determinant(Q, m) == leibniz


@given(ring_and_elements())
def test_ring_axioms(data):
    ring, (a, b, c) = data
    a, b, c = (Elem(ring, v if ring.contains(v) else ring.convert(v)) for v in (a, b, c))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a and a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + (-a)).is_zero()
    assert ring.one_elem * a == a


@given(ring_and_elements(count=1))
def test_inverse_is_exact(data):
    ring, (a,) = data
    a = Elem(ring, a if ring.contains(a) else ring.convert(a))
    b = invert(a)
    if b is not NotInvertible:
        assert a * b == ring.one_elem


@given(st.integers(2, 40), st.integers(-100, 100))
def test_residue_canonical_form(n, k):
    Z = IntegersMod(n)
    e = Z(k)
    assert 0 <= e.value < n
    assert Z.parse(str(e)) == e
