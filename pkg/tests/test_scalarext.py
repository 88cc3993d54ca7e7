import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slopecalc import IntegersMod, Rationals, parse_map, parse_ring
from slopecalc.diffquot import tangent
from slopecalc.rings import RingError
from slopecalc.scalarext import (
    SearchTooLarge,
    automorphism_search,
    build_extension_ring,
    check_axioms,
    delta_point,
    ext_mul,
    order2_relations,
    parse_time,
    scalar_extension_apply,
    triangularity_probe,
    verify_iterated_adjunction,
    w11_square_finding,
)

Q = Rationals()


def test_order_one_symbolic_product():
    R = build_extension_ring(Q, 1)
    assert R.basis == ("0", "1")
    C = R.coeff
    x0, x1, y0, y1 = (C.parse(s).value for s in ("2", "3", "5", "7"))
    t = C.generator("t")
    got = ext_mul(R, (x0, x1), (y0, y1))
    assert got[0] == C.parse("10").value
    assert got[1] == C.add(C.parse("14 + 15").value, C.mul(C.parse("21").value, t))


def test_order_one_numeric_times():
    R = build_extension_ring(Q, 1, {"1": 2})
    assert ext_mul(R, (1, 1), (1, 1)) == (1, 4)
    D = build_extension_ring(Q, 1, {"1": 0})
    assert ext_mul(D, (0, 1), (0, 1)) == (0, 0)
    a = (Fraction(3), Fraction(-2))
    assert ext_mul(D, (1, 0), a) == a


def test_table_row_for_square_of_generator():
    R = build_extension_ring(Q, 1)
    rows = {(a, b, g): R.coeff.fmt(c) for a, b, g, c in R.table()}
    assert rows[("1", "1", "1")] == "t"
    assert ("1", "1", "0") not in rows


def test_order_two_relations():
    R = build_extension_ring(Q, 2)
    for name, (computed, expected) in order2_relations(R).items():
        assert computed == expected, name


def test_w11_square_follows_the_chain():
    finding = w11_square_finding()
    assert finding.oracle_agrees and finding.matches_chain
    assert not finding.matches_printed


@pytest.mark.parametrize(
    "ring,times",
    [("Q", (None, None, None)), ("Z/3", (1, 2, 1)), ("Z/3", (0, 0, 0)), ("Z/5", (2, 0, 3)), ("Z/4", (1, 3, 2))],
)
def test_iterated_adjunction(ring, times):
    assert verify_iterated_adjunction(ring, *times).match


@pytest.mark.parametrize("k", [1, 2, 3])
def test_axioms_and_triangularity(k):
    R = build_extension_ring(Q, k)
    assert check_axioms(R).ok
    assert triangularity_probe(R).holds


def test_zero_times_give_iterated_dual_numbers():
    R = build_extension_ring(Q, 2, "0,0,0")
    for a, b in itertools.product(R.basis, repeat=2):
        overlap = any(x == y == "1" for x, y in zip(a, b))
        prod = ext_mul(R, R.basis_vector(a), R.basis_vector(b))
        if overlap:
            assert all(c == 0 for c in prod)
        else:
            union = "".join("1" if "1" in (x, y) else "0" for x, y in zip(a, b))
            assert prod == R.basis_vector(union)


def test_parse_time_forms():
    Z5 = IntegersMod(5)
    assert parse_time("symbolic", 2, Z5) == {"01": None, "10": None, "11": None}
    got = parse_time("1,2,3", 2, Z5)
    assert [got[b] for b in ("01", "10", "11")] == [Z5(1), Z5(2), Z5(3)]
    got = parse_time("t10=4", 2, Z5)
    assert got["10"] == Z5(4) and got["01"] is None
    with pytest.raises(RingError):
        parse_time("1,2", 2, Z5)
    with pytest.raises(RingError):
        parse_time("t99=1", 2, Z5)


def test_dual_numbers_compute_derivatives():
    R = build_extension_ring(Q, 1, {"1": 0})
    f = parse_map("x^2", Q, ("x",))
    x, v = Fraction(3), Fraction(5)
    assert scalar_extension_apply(f, R, [(x, v)]) == [(x * x, 2 * x * v)]
    T = tangent(f)
    assert [e.value for e in T.evaluate([x, v])] == [x * x, 2 * x * v]


def test_symbolic_time_recovers_first_quotient():
    R = build_extension_ring(parse_ring("Q[x,v]"), 1)
    C = R.coeff
    f = parse_map("z^2", R.base, ("z",))
    x, v = C.generator("x"), C.generator("v")
    out = scalar_extension_apply(f, R, [(x, v)])[0]
    assert out[1] == C.parse("2*x*v + t*v^2").value


def test_identity_extends_to_identity():
    R = build_extension_ring(IntegersMod(3), 2, "1,2,1")
    f = parse_map("(a, b)", R.base, ("a", "b"))
    pts = [(1, 2, 0, 1), (2, 2, 1, 0)]
    assert scalar_extension_apply(f, R, pts) == [R.vector(p) for p in pts]


@pytest.mark.parametrize("k", [1, 2])
def test_scalar_extension_equals_delta(k):
    rng = random.Random(k)
    for ring in (Q, IntegersMod(3)):
        R = build_extension_ring(ring, k)
        f = parse_map("(x0^2*x1 - x1, 2*x0^3 + 1)", ring, ("x0", "x1"))
        args = [tuple(ring.random(rng, 5) for _ in range(R.rank)) for _ in range(2)]
        assert scalar_extension_apply(f, R, args) == delta_point(f, R, args)


def brute_force_rank2_automorphisms(n, t):
    """Unital linear maps fixing 1 and sending w to a + b w, with (a + b w)^2 = t (a + b w)."""
    found = []
    for a, b in itertools.product(range(n), repeat=2):
        # (a + b w)^2 = a^2 + (2ab + b^2 t) w
        sq = (a * a % n, (2 * a * b + b * b * t) % n)
        if sq == (t * a % n, t * b % n) and any(b * c % n == 1 for c in range(n)):
            found.append((a, b))
    return found


@pytest.mark.parametrize("n,t,order", [(2, 0, 1), (3, 0, 2), (3, 1, 2), (5, 0, 4), (5, 2, 2)])
def test_automorphisms_of_rank_two_rings(n, t, order):
    R = build_extension_ring(IntegersMod(n), 1, {"1": t})
    res = automorphism_search(R)
    assert res.order == order == len(brute_force_rank2_automorphisms(n, t))
    assert ((1, 0), (0, 1)) in res.matrices


def test_automorphisms_of_split_ring_swap_idempotents():
    R = build_extension_ring(IntegersMod(3), 1, {"1": 1})
    mats = automorphism_search(R).matrices
    assert ((1, 1), (0, 2)) in mats


@pytest.mark.parametrize("n,times,order", [(2, "0,0,0", 24), (3, "1,2,1", 4)])
def test_automorphisms_at_order_two(n, times, order):
    R = build_extension_ring(IntegersMod(n), 2, times)
    assert automorphism_search(R).order == order


def test_automorphism_search_bounds():
    with pytest.raises(SearchTooLarge):
        automorphism_search(build_extension_ring(IntegersMod(7), 1, {"1": 0}))
    with pytest.raises(SearchTooLarge):
        automorphism_search(build_extension_ring(IntegersMod(2), 3, "0,0,0,0,0,0,0"))
    with pytest.raises(ValueError):
        automorphism_search(build_extension_ring(IntegersMod(3), 1))


@given(st.sampled_from([2, 3, 4, 5, 6]), st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), st.data())
def test_order_two_rings_are_commutative_unital_associative(n, a, b, c, data):
    R = build_extension_ring(IntegersMod(n), 2, f"{a % n},{b % n},{c % n}")
    assert check_axioms(R).ok
    assert triangularity_probe(R).holds
