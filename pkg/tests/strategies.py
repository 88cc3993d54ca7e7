"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from slopecalc import IntegersMod, Poly, PolyMap, PolynomialRing, Rationals

Q = Rationals()

rationals = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 12))
moduli = st.sampled_from([2, 3, 4, 5, 6, 7, 12])


@st.composite
def ring_and_elements(draw, count=3):
    kind = draw(st.sampled_from(["Q", "Z", "Q[t]"]))
    if kind == "Q":
        ring = Q
        vals = [draw(rationals) for _ in range(count)]
    elif kind == "Z":
        ring = IntegersMod(draw(moduli))
        vals = [draw(st.integers(0, ring.n - 1)) for _ in range(count)]
    else:
        ring = PolynomialRing(Q, ("t",))
        vals = [draw(polys(Q, ("t",), max_terms=3)) for _ in range(count)]
    return ring, vals


@st.composite
def polys(draw, ring, gens, max_terms=4, max_degree=3):
    n = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_degree)) for _ in gens)
        if sum(e) > max_degree:
            continue
        if ring == Q:
            c = draw(rationals)
        else:
            c = draw(st.integers(0, ring.n - 1))
        terms.append((e, c))
    return Poly.from_terms(ring, tuple(gens), terms)


@st.composite
def polymaps(draw, ring=None, max_rank=2, max_degree=3, max_terms=3):
    if ring is None:
        ring = draw(st.sampled_from([Q, IntegersMod(2), IntegersMod(3), IntegersMod(5)]))
    m = draw(st.integers(1, max_rank))
    n = draw(st.integers(1, max_rank))
    variables = tuple(f"x{i}" for i in range(m))
    comps = tuple(draw(polys(ring, variables, max_terms, max_degree)) for _ in range(n))
    return PolyMap(ring, variables, comps)


@st.composite
def curves(draw, ring=Q, max_degree=6):
    comps = (draw(polys(ring, ("u",), 4, max_degree)),)
    return PolyMap(ring, ("u",), comps)
