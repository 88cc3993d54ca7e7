"""Exact higher-order difference calculus over commutative rings."""

from .rings import (
    Elem,
    IntegersMod,
    NotInvertible,
    PolynomialRing,
    Rationals,
    Ring,
    StructureConstantAlgebra,
    invert,
    make_ring,
    parse_ring,
)
from .poly import NotDivisible, Poly, PolyMap, compose, evaluate, exact_divide, exact_divide_diff, identity_map
from .expr import parse_map, parse_poly

__all__ = [
    "Elem",
    "IntegersMod",
    "NotDivisible",
    "NotInvertible",
    "Poly",
    "PolyMap",
    "PolynomialRing",
    "Rationals",
    "Ring",
    "StructureConstantAlgebra",
    "compose",
    "evaluate",
    "exact_divide",
    "exact_divide_diff",
    "identity_map",
    "invert",
    "make_ring",
    "parse_map",
    "parse_poly",
    "parse_ring",
]
