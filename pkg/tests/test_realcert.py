import copy
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fixcert.geometry import Ambient, Variety
from fixcert.poly import MultiPoly
from fixcert.realcert import PositivityCertificate, Step, Term, check_certificate

from .conftest import manifest

CERTIFIED = ["p-4-1", "p-2-6", "a-2-2-d2", "a-2-2-d4", "a-1-4", "p-3-1", "p-3-17"]


def _cert(m):
    for c in m.claims:
        if c.kind == "real_pointless" and "certificate" in c.params:
            return c, PositivityCertificate.from_tree(c.params["certificate"])
    raise LookupError(m.id)


def _variety(m, claim):
    if "equations" in claim.params:
        return Variety.from_strings(m.ambient, claim.params["equations"], m.field)
    return m.variety


def _mutations(cert, ring):
    """Every certificate that differs from ``cert`` by one sign."""
    for si, step in enumerate(cert.steps):
        for ti, t in enumerate(step.terms):
            c = copy.deepcopy(cert)
            c.steps[si].terms[ti].c = -Fraction(str(t.c))
            yield f"c of step {si + 1} term {ti + 1}", c
            q = ring.parse(t.q)
            for mono in q.terms_dict:
                flipped = dict(q.terms_dict)
                flipped[mono] = -flipped[mono]
                c = copy.deepcopy(cert)
                c.steps[si].terms[ti].q = str(MultiPoly(ring, flipped))
                yield f"q of step {si + 1} term {ti + 1}", c


@pytest.mark.parametrize("name", CERTIFIED)
def test_corpus_certificates_pass(name):
    m = manifest(name)
    claim, cert = _cert(m)
    assert check_certificate(_variety(m, claim), cert).verdict == "CertifiedEmpty"


@pytest.mark.parametrize("name", ["p-4-1", "p-2-6", "a-2-2-d2"])
def test_every_sign_mutation_is_rejected(name):
    m = manifest(name)
    claim, cert = _cert(m)
    V = _variety(m, claim)
    seen = 0
    for where, bad in _mutations(cert, V.ring):
        seen += 1
        assert check_certificate(V, bad).verdict == "Rejected", where
    assert seen >= 4


def test_wrong_forced_zero_rejected():
    m = manifest("a-2-2-d2")
    claim, cert = _cert(m)
    cert.steps[0].forced_zero = ["u", "v", "x"]
    rep = check_certificate(_variety(m, claim), cert)
    assert rep.verdict == "Rejected" and "forced_zero" in rep.reason


def test_open_chart_rejected():
    A = Ambient.projective(2)
    V = Variety.from_strings(A, ["x0^2 + x1^2"])
    cert = PositivityCertificate([Step("x0^2 + x1^2", [Term(1, "1", "x0"), Term(1, "1", "x1")], ["x0", "x1"])])
    rep = check_certificate(V, cert)
    assert rep.verdict == "Rejected" and "chart" in rep.reason


def test_odd_power_q_rejected():
    A = Ambient.product([["x0", "x1"], ["y0", "y1"]])
    V = Variety.from_strings(A, ["x0*y0^2 + x1*y1^2"])
    cert = PositivityCertificate([Step("x0*y0^2 + x1*y1^2", [Term(1, "x0", "y0"), Term(1, "x1", "y1")],
                                       ["y0", "y1"])])
    assert check_certificate(V, cert).verdict == "Rejected"


@given(st.lists(st.integers(-5, 5).filter(bool), min_size=4, max_size=4), st.integers(1, 9))
def test_diagonal_quadrics(coefs, scale):
    """sum a_i x_i^2 has a certificate of this shape exactly when every a_i has the same sign."""
    A = Ambient.projective(3)
    eq = " + ".join(f"({a})*x{i}^2" for i, a in enumerate(coefs))
    V = Variety.from_strings(A, [eq])
    sign = 1 if coefs[0] > 0 else -1
    target = " + ".join(f"({sign * scale * a})*x{i}^2" for i, a in enumerate(coefs))
    terms = [Term(Fraction(sign * scale * a), "1", f"x{i}") for i, a in enumerate(coefs)]
    cert = PositivityCertificate([Step(target, terms, [f"x{i}" for i in range(4)])])
    expected = "CertifiedEmpty" if all(a * sign > 0 for a in coefs) else "Rejected"
    assert check_certificate(V, cert).verdict == expected


def test_tree_round_trip():
    _, cert = _cert(manifest("p-2-6"))
    again = PositivityCertificate.from_tree(cert.to_tree())
    assert [s.target for s in again.steps] == [s.target for s in cert.steps]
    assert [[(str(t.c), t.q, t.m) for t in s.terms] for s in again.steps] == \
        [[(str(t.c), t.q, t.m) for t in s.terms] for s in cert.steps]
