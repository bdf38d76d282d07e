import pytest
import sympy as sp
from hypothesis import given, strategies as st

from fixcert.cyclotomic import CyclotomicField
from fixcert.geometry import Ambient, Variety, dimension_of, is_empty_valid, is_invariant, is_smooth

from .conftest import manifest
from .oracles import to_sympy


def _proj(n, eqs, order=1):
    A = Ambient.projective(n)
    return Variety.from_strings(A, eqs, CyclotomicField(order))


def _sympy_singular_empty(eqs, names):
    """Projective singular locus of a hypersurface is empty iff the partials have only the origin as common zero."""
    xs = sp.symbols(names)
    f = sp.sympify(eqs[0], locals=dict(zip(names, xs)))
    G = sp.groebner([sp.diff(f, x) for x in xs], *xs, order="grevlex")
    # the origin is the only zero iff every variable has a pure power leading term
    leads = [sp.Poly(g, *xs).monoms(order="grevlex")[0] for g in G.exprs]
    return all(any(m[i] > 0 and sum(m) == m[i] for m in leads) for i in range(len(xs)))


@pytest.mark.parametrize("eq", [
    "x0^3 + x1^3 + x2^3 + x3^3",
    "x0^3 + x1^3 + x2^3 + x3^3 + x0*x1*x2",
    "x0^2*x1 + x1^3 + x2^3 + x3^3",
    "x0^3 + x1^3 + x2^3",                 # cone over a plane cubic
    "x0*x1 - x2*x3 + x3^2",
    "x0*x1 - x2^2",                        # quadric cone
])
def test_hypersurfaces_agree_with_sympy(eq):
    V = _proj(3, [eq])
    expected = _sympy_singular_empty([eq], ["x0", "x1", "x2", "x3"])
    assert is_smooth(V).status == ("Smooth" if expected else "Singular")


def test_line_in_product_of_planes_is_smooth():
    A = Ambient.product([["x0", "x1", "x2"], ["y0", "y1", "y2"]])
    V = Variety.from_strings(A, ["x1", "x2", "y0", "y1"])
    r = is_smooth(V)
    assert r.status == "Smooth" and r.dimension == 0


def test_weighted_cone_point_detected():
    V = manifest("a-4-2").variety
    r = is_smooth(V)
    assert r.status == "Singular"
    assert V.contains_point([0, 0, 0, 0, 1])


def test_quartic_double_solid_with_stratum():
    A = Ambient.weighted([1, 1, 1, 1, 2], ["x1", "x2", "x3", "x4", "y"])
    smooth = Variety.from_strings(A, ["y^2 - x1^4 - x2^4 - x3^4 - x4^4"])
    assert is_smooth(smooth).status == "Smooth"
    assert dimension_of(smooth) == 3
    bad = Variety.from_strings(A, ["y^2 - x1^4 - x2^4 - x3^4"])
    assert is_smooth(bad).status == "Singular"


def test_dimension_mismatch_reported():
    V = _proj(3, ["x0", "x1"])
    r = is_smooth(V, expected_dimension=2)
    assert r.status == "DimensionMismatch" and r.dimension == 1


@given(st.integers(1, 4), st.integers(0, 3))
def test_dimension_of_linear_spaces(n, k):
    k = min(k, n)
    V = _proj(n, [f"x{i}" for i in range(k)])
    assert dimension_of(V) == n - k


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_emptiness_of_conic_and_line(coef):
    """A conic x0^2+x1^2+x2^2 meets any line; adding the third coordinate hyperplane cuts it to points."""
    a, b, c = coef
    eqs = ["x0^2 + x1^2 + x2^2", f"{a}*x0 + {b}*x1 + {c}*x2"]
    V = _proj(2, eqs, order=4)
    assert not is_empty_valid(V) if any(coef) else True
    W = _proj(2, ["x0", "x1", "x2^2"])
    assert is_empty_valid(W)


def test_empty_routes_agree():
    for eqs, empty in [(["x0^2", "x1^3 - x0*x2^2", "x2"], True), (["x0*x1", "x2"], False)]:
        V = _proj(2, eqs)
        assert is_empty_valid(V, route="chart") is empty
        assert is_empty_valid(V, route="rabinowitsch") is empty


def test_invariance_needs_projective_closure():
    V = _proj(2, ["x0*x1 - x2^2"])
    assert is_invariant(V, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert not is_invariant(V, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])


def test_unknown_route_rejected():
    with pytest.raises(ValueError):
        is_smooth(_proj(2, ["x0"]), route="sideways")


# --- Lagrangian Grassmannian section ---------------------------------------

def _lgr_chart_u_oracle():
    """Singular locus on the chart u=1: Y = adj X, v = det X, x33 solved from the first linear form."""
    x11, x22, x12, x13, x23 = s = sp.symbols("x11 x22 x12 x13 x23")
    x33 = -(1967 * x11 + 1973 * x22) / sp.Integer(1983)
    X = sp.Matrix([[x11, x12, x13], [x12, x22, x23], [x13, x23, x33]])
    Y = X.adjugate()
    v = X.det()
    L2 = 1967 * Y[0, 0] + 1973 * Y[1, 1] + 1983 * Y[2, 2]
    L3 = 2024 * x11 + 2025 * x22 + 2024 * Y[0, 0] + 2025 * Y[1, 1] - v - 1
    eqs = [sp.expand(L2 * 1983 ** 2), sp.expand(L3 * 1983 ** 3)]
    J = sp.Matrix([[sp.diff(e, x) for x in s] for e in eqs])
    minors = [sp.expand(J[:, [i, j]].det()) for i in range(5) for j in range(i + 1, 5)]
    return sp.groebner(eqs + minors, *s, order="grevlex").exprs


def test_lgr_chart_oracle_is_smooth():
    assert _lgr_chart_u_oracle() == [1]


def test_lgr_section_smooth_full_tier():
    V = manifest("a-1-8").variety
    assert is_smooth(V, tier="fast").status == "CapExceeded"
    assert is_smooth(V, tier="full", route="charts").status == "Smooth"


def test_special_lgr_section_is_singular():
    V = manifest("a-1-8").variety
    base = [str(g) for g in V.ideal.generators[:21]]
    W = Variety.from_strings(V.ambient, base + ["x11", "x22", "y33 + v"])
    pt = [1] + [0] * 13
    assert W.contains_point(pt)
    assert is_smooth(W, tier="full", route="charts").status == "Singular"
