"""Conversions to sympy, used as an independent oracle."""
import sympy as sp
from gmpy2 import mpq

from fixcert.poly import MultiPoly, Ring
from fixcert.cyclotomic import CyclotomicField


def to_sympy(p: MultiPoly, symbols):
    out = 0
    for mono, c in p.terms_dict.items():
        term = sp.Rational(int(mpq(c).numerator), int(mpq(c).denominator))
        for s, e in zip(symbols, mono):
            term *= s ** e
        out += term
    return sp.expand(out)


def from_sympy(expr, ring: Ring) -> MultiPoly:
    poly = sp.Poly(sp.expand(expr), *sp.symbols(ring.coords))
    terms = {}
    for mono, c in poly.terms():
        c = sp.Rational(c)
        terms[tuple(mono)] = ring.field.coerce(mpq(int(c.p), int(c.q)))
    return MultiPoly(ring, terms)


def rational_ring(names):
    return Ring(tuple(names), CyclotomicField(1))
