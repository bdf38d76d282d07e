import pytest
import sympy as sp
from hypothesis import given, strategies as st

from fixcert.cyclotomic import CyclotomicField
from fixcert.geometry import Ambient
from fixcert.poly import Inhomogeneous, PolyParseError, Ring, multidegree, pullback

from .oracles import from_sympy, rational_ring, to_sympy

NAMES = ("x", "y", "z")
R = rational_ring(NAMES)
SYMS = sp.symbols(NAMES)

monomial = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(monomial, st.integers(-6, 6).filter(bool), max_size=5).map(
    lambda d: sum((R.const(c) * R.var(0) ** a * R.var(1) ** b * R.var(2) ** e for (a, b, e), c in d.items()),
                  R.zero()))


@given(polys, polys)
def test_arithmetic_matches_sympy(f, g):
    F, G = to_sympy(f, SYMS), to_sympy(g, SYMS)
    assert to_sympy(f * g, SYMS) == sp.expand(F * G)
    assert to_sympy(f + g, SYMS) == sp.expand(F + G)
    assert to_sympy(f - g, SYMS) == sp.expand(F - G)
    assert to_sympy(f.diff(1), SYMS) == sp.diff(F, SYMS[1])


@given(polys)
def test_print_parse_round_trip(f):
    assert R.parse(str(f)) == f
    assert from_sympy(to_sympy(f, SYMS), R) == f


def test_grammar_constants():
    S = Ring(("x", "y"), CyclotomicField(12))
    i, w = S.parse("i"), S.parse("omega")
    assert i * i == S.parse("-1")
    assert S.parse("zeta(12)^3") == i
    assert w ** 3 == S.one()
    assert S.parse("(x + i*y)*(x - i*y)") == S.parse("x^2 + y^2")


@pytest.mark.parametrize("text", ["x +", "x ** y", "w", "zeta(5)", "(x"])
def test_parse_errors(text):
    S = Ring(("x", "y"), CyclotomicField(4))
    with pytest.raises((PolyParseError, ValueError)):
        S.parse(text)


def test_multidegree_and_inhomogeneous():
    A = Ambient.product([["u", "v"], ["x", "y", "z"]])
    S = A.ring()
    assert multidegree(S.parse("u^2*x + v^2*y"), A.grading) == (2, 1)
    deg = multidegree(S.parse("u*x + v"), A.grading)
    assert isinstance(deg, Inhomogeneous)
    P = Ambient.projective(2, ["x1", "x2", "x3"])
    assert isinstance(multidegree(P.ring().parse("x1 + x2^2"), P.grading), Inhomogeneous)


def test_pullback_is_substitution_of_images():
    M = [[0, 1, 0], [1, 0, 0], [0, 0, -1]]      # x -> y, y -> x, z -> -z
    f = R.parse("x^2*z + y")
    assert pullback(f, M) == R.parse("-y^2*z + x")
