"""Exact checker for sum-of-positive-terms certificates of real pointlessness.

A certificate is a list of steps.  Each step names a polynomial that vanishes
on real points (a defining equation, possibly restricted to the coordinates
already shown to vanish) and writes it as a sum of terms ``c * q * m^2``:
``c`` a positive rational, ``q`` a positive constant or a positive combination
of even powers of single coordinates from one weight block, ``m`` a monomial.

On a real valid point every term is nonnegative, so every term vanishes.  A
form ``q`` is strictly positive when its variables, together with the
coordinates already known to vanish, meet every irrelevant monomial (the point
would otherwise be invalid); then ``m = 0``.  The certificate succeeds once the
known-zero coordinates meet every irrelevant monomial.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cyclotomic import is_rational, to_rational
from .geometry import Variety
from .poly import MultiPoly

__all__ = ["Term", "Step", "PositivityCertificate", "RealEmptinessReport", "check_certificate"]


@dataclass
class Term:
    c: object
    q: str
    m: str


@dataclass
class Step:
    target: str
    terms: list[Term]
    forced_zero: list[str] = field(default_factory=list)


@dataclass
class PositivityCertificate:
    steps: list[Step]

    @classmethod
    def from_tree(cls, tree) -> "PositivityCertificate":
        steps = []
        for s in tree.get("steps", []) if isinstance(tree, dict) else tree:
            terms = [Term(t.get("c", 1), str(t.get("q", "1")), str(t.get("m", "1"))) for t in s.get("terms", [])]
            steps.append(Step(str(s["target"]), terms, [str(x) for x in s.get("forced_zero", [])]))
        return cls(steps)

    def to_tree(self) -> dict:
        return {"steps": [{"target": s.target, "forced_zero": list(s.forced_zero),
                           "terms": [{"c": str(t.c), "q": t.q, "m": t.m} for t in s.terms]}
                          for s in self.steps]}


@dataclass
class RealEmptinessReport:
    verdict: str                 # CertifiedEmpty | Rejected
    reason: str = ""
    forced_zero: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.verdict == "CertifiedEmpty"


def _reject(reason: str, Z=()) -> RealEmptinessReport:
    return RealEmptinessReport("Rejected", reason, sorted(Z))


def _restrict(p: MultiPoly, zero: set[int]) -> MultiPoly:
    if not zero:
        return p
    return MultiPoly(p.ring, {m: c for m, c in p.terms_dict.items() if not any(m[j] for j in zero)})


def _is_positive_rational(c) -> bool:
    return is_rational(c) and to_rational(c) > 0


def check_certificate(V: Variety, cert: PositivityCertificate) -> RealEmptinessReport:
    ring = V.ring
    amb = V.ambient
    for g in V.ideal.generators:
        if not all(is_rational(c) for c in g.coefficients()):
            return _reject("variety has non-rational coefficients")
    weights = amb.grading.weights
    irrelevant = [frozenset(j for j, e in enumerate(m) if e) for m in amb.irrelevant]
    Z: set[int] = set()

    def covers(S: set[int]) -> bool:
        return all(b & S for b in irrelevant)

    for k, step in enumerate(cert.steps, 1):
        try:
            target = ring.parse(step.target)
        except ValueError as e:
            return _reject(f"step {k}: cannot parse target: {e}", _names(ring, Z))
        if not target:
            return _reject(f"step {k}: target is zero", _names(ring, Z))
        # the target must be a nonzero multiple of a defining equation restricted to Z
        if not any(_proportional(target, _restrict(g, Z)) for g in V.ideal.generators):
            return _reject(f"step {k}: target is not a defining equation restricted to the known zeros",
                           _names(ring, Z))
        total = ring.zero()
        parsed = []
        for t in step.terms:
            try:
                c = ring.field.coerce(ring.parse(str(t.c)).constant_value()) if isinstance(t.c, str) else ring.field.coerce(t.c)
                q = ring.parse(t.q)
                m = ring.parse(t.m)
            except ValueError as e:
                return _reject(f"step {k}: cannot parse term: {e}", _names(ring, Z))
            if not _is_positive_rational(c):
                return _reject(f"step {k}: non-positive coefficient {c}", _names(ring, Z))
            qvars = _check_q(q, weights)
            if isinstance(qvars, str):
                return _reject(f"step {k}: {qvars}", _names(ring, Z))
            if len(m) != 1 or next(iter(m.terms_dict.values())) != 1:
                return _reject(f"step {k}: m = {m} is not a monic monomial", _names(ring, Z))
            total = total + q * m * m * c
            parsed.append((qvars, next(iter(m.terms_dict))))
        diff = target - total
        if diff:
            lead = diff.leading_term()
            return _reject(f"step {k}: identity mismatch, leading term of the difference "
                           f"{MultiPoly(ring, {lead[1]: lead[0]})}", _names(ring, Z))
        # chain the consequences within the step until nothing changes
        derived = set(Z)
        contradiction = False
        changed = True
        while changed and not contradiction:
            changed = False
            for qvars, mono in parsed:
                positive = not qvars or covers(set(qvars) | derived)
                if not positive:
                    continue
                mvars = [j for j, e in enumerate(mono) if e]
                if not mvars:
                    contradiction = True
                    break
                if len(mvars) == 1 and mvars[0] not in derived:
                    derived.add(mvars[0])
                    changed = True
        if contradiction:
            return RealEmptinessReport("CertifiedEmpty", f"step {k}: a strictly positive term cannot vanish",
                                       _names(ring, derived))
        try:
            declared = {ring.index(x) for x in step.forced_zero}
        except ValueError:
            return _reject(f"step {k}: unknown coordinate in forced_zero", _names(ring, Z))
        missing = declared - derived
        if missing:
            return _reject(f"step {k}: forced_zero {sorted(ring.coords[j] for j in missing)} does not follow "
                           f"from the decomposition", _names(ring, Z))
        Z |= declared
    if covers(Z):
        return RealEmptinessReport("CertifiedEmpty", "the forced zeros meet every irrelevant monomial",
                                   _names(ring, Z))
    return _reject("the forced zeros leave a valid chart open", _names(ring, Z))


def _names(ring, Z) -> list[str]:
    return sorted(ring.coords[j] for j in Z)


def _proportional(a: MultiPoly, b: MultiPoly) -> bool:
    if not a or not b or set(a.terms_dict) != set(b.terms_dict):
        return False
    m = next(iter(a.terms_dict))
    s = a.terms_dict[m] / b.terms_dict[m]
    return all(a.terms_dict[k] == s * b.terms_dict[k] for k in a.terms_dict)


def _check_q(q: MultiPoly, weights: Sequence) -> list[int] | str:
    """Variables of a valid q, or an error message.

    A valid q is a positive combination of even powers of single coordinates
    from one block, so it is strictly positive unless all its variables vanish.
    """
    if not q:
        return "q is zero"
    if q.is_constant():
        c = q.constant_value()
        return [] if _is_positive_rational(c) else f"non-positive coefficient {c} in q"
    qvars = []
    for mono, c in q.terms_dict.items():
        nz = [(j, e) for j, e in enumerate(mono) if e]
        if len(nz) != 1 or nz[0][1] % 2:
            return f"q = {q} is not a sum of even powers of single coordinates"
        if not _is_positive_rational(c):
            return f"non-positive coefficient {c} in q"
        qvars.append(nz[0][0])
    if len({weights[j] for j in qvars}) != 1:
        return f"q = {q} mixes coordinates of different blocks"
    return sorted(qvars)
