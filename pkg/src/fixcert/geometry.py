"""Graded ambient spaces, varieties inside them, and the geometric predicates.

A point of an ambient is a torus orbit of a coordinate vector outside V(B),
where B is the irrelevant monomial ideal.  Everything is decided over the
algebraic closure by Groebner computations.
"""
from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import CyclotomicField
from .groebner import (
    Budget,
    GroebnerBasis,
    Ideal,
    ResourceCapExceeded,
    dimension,
    groebner_basis,
    is_unit_ideal,
    normal_form,
    radical_membership,
    saturate,
)
from .poly import GREVLEX, Grading, MultiPoly, Ring, multidegree, pullback

__all__ = [
    "Ambient",
    "Variety",
    "SmoothnessVerdict",
    "is_empty_valid",
    "is_invariant",
    "dimension_of",
    "is_smooth",
    "linear_section",
    "TIERS",
]

# per tier: maximum number of Jacobian minors, multiplier on the pair budget
TIERS = {"fast": (5_000, 1), "full": (2_000_000, 50)}


def _rank(rows: Sequence[Sequence[int]]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def _primes(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Ambient:
    """Graded coordinates, irrelevant monomials and declared singular strata."""

    coords: tuple[str, ...]
    grading: Grading
    irrelevant: tuple[tuple[int, ...], ...]
    singular_strata: tuple[tuple[str, ...], ...] = ()
    kind: str = "cox"

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "irrelevant", tuple(tuple(m) for m in self.irrelevant))
        object.__setattr__(self, "singular_strata", tuple(tuple(s) for s in self.singular_strata))
        if len(self.grading.weights) != len(self.coords):
            raise ValueError("weight matrix rows must match the coordinates")
        for m in self.irrelevant:
            if len(m) != len(self.coords):
                raise ValueError("irrelevant monomial of wrong length")

    # presets ------------------------------------------------------------
    @classmethod
    def projective(cls, n: int, names: Sequence[str] | None = None) -> "Ambient":
        names = tuple(names) if names else tuple(f"x{i}" for i in range(n + 1))
        if len(names) != n + 1:
            raise ValueError(f"P^{n} needs {n + 1} coordinate names")
        return cls.product([names], kind="projective")

    @classmethod
    def weighted(cls, weights: Sequence[int], names: Sequence[str] | None = None) -> "Ambient":
        names = tuple(names) if names else tuple(f"x{i}" for i in range(len(weights)))
        if len(names) != len(weights):
            raise ValueError("one name per weight")
        n = len(names)
        B = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
        strata = []
        for p in sorted({p for w in weights for p in _primes(w)}):
            zero = [names[j] for j, w in enumerate(weights) if w % p]
            if zero and len(zero) < n:
                strata.append(tuple(zero))
        return cls(names, Grading([[w] for w in weights]), B, strata, kind="weighted")

    @classmethod
    def product(cls, blocks: Sequence[Sequence[str]], kind: str = "product") -> "Ambient":
        names = tuple(c for b in blocks for c in b)
        r = len(blocks)
        W = []
        for i, b in enumerate(blocks):
            W += [[1 if k == i else 0 for k in range(r)]] * len(b)
        offsets = list(itertools.accumulate([0] + [len(b) for b in blocks]))
        B = []
        for choice in itertools.product(*[range(len(b)) for b in blocks]):
            e = [0] * len(names)
            for i, j in enumerate(choice):
                e[offsets[i] + j] = 1
            B.append(tuple(e))
        return cls(names, Grading(W), B, (), kind=kind)

    @classmethod
    def cox(cls, coords: Sequence[str], weights: Sequence[Sequence[int]], irrelevant: Sequence,
            singular_strata: Sequence[Sequence[str]] = ()) -> "Ambient":
        coords = tuple(coords)
        ring = Ring(coords)
        B = []
        for b in irrelevant:
            if isinstance(b, str):
                p = ring.parse(b)
                if len(p) != 1:
                    raise ValueError(f"irrelevant generator {b!r} is not a monomial")
                b = next(iter(p.terms_dict))
            B.append(tuple(b))
        return cls(coords, Grading(weights), B, singular_strata, kind="cox")

    def with_coordinate(self, name: str, weight: Sequence[int]) -> "Ambient":
        """Add a coordinate that the irrelevant ideal does not constrain (double-cover fibre)."""
        W = [list(r) for r in self.grading.weights] + [list(weight)]
        B = [m + (0,) for m in self.irrelevant]
        return Ambient(self.coords + (name,), Grading(W), B, self.singular_strata, kind="cox")

    # derived data --------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.coords)

    @property
    def rank(self) -> int:
        return self.grading.rank

    @property
    def dim(self) -> int:
        return self.nvars - self.rank

    def ring(self, fld: CyclotomicField | None = None) -> Ring:
        return Ring(self.coords, fld or CyclotomicField(1))

    def blocks(self) -> list[list[int]]:
        """Coordinate indices grouped by identical weight vector, in order of appearance."""
        groups: dict[tuple, list[int]] = {}
        for j, row in enumerate(self.grading.weights):
            groups.setdefault(row, []).append(j)
        return list(groups.values())

    def unit_weighted(self) -> bool:
        r = self.rank
        return all(sum(row) == 1 and all(x in (0, 1) for x in row) and len(row) == r
                   for row in self.grading.weights)

    def irrelevant_polys(self, ring: Ring) -> list[MultiPoly]:
        return [MultiPoly(ring, {m: ring.field.one}) for m in self.irrelevant]

    def is_valid_point(self, point: Sequence) -> bool:
        for m in self.irrelevant:
            if all(point[j] for j, e in enumerate(m) if e):
                return True
        return False

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "coords": list(self.coords),
            "weights": [list(r) for r in self.grading.weights],
            "irrelevant_generators": len(self.irrelevant),
            "singular_strata": [list(s) for s in self.singular_strata],
        }


@dataclass(frozen=True)
class Variety:
    ambient: Ambient
    ideal: Ideal

    def __post_init__(self):
        if self.ideal.ring.coords != self.ambient.coords:
            raise ValueError("ideal ring does not match the ambient coordinates")

    @classmethod
    def from_strings(cls, ambient: Ambient, equations: Sequence[str], fld: CyclotomicField | None = None) -> "Variety":
        ring = ambient.ring(fld)
        return cls(ambient, Ideal(ring, [ring.parse(e) for e in equations]))

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    def multidegrees(self) -> list:
        return [multidegree(g, self.ambient.grading) for g in self.ideal.generators]

    def with_ideal(self, ideal: Ideal) -> "Variety":
        return Variety(self.ambient, ideal)

    def strata_ideals(self) -> list[Ideal]:
        return [Ideal(self.ring, [self.ring.parse(s) for s in st]) for st in self.ambient.singular_strata]

    def contains_point(self, point: Sequence) -> bool:
        return all(not g.evaluate(point) for g in self.ideal.generators)


@dataclass
class SmoothnessVerdict:
    status: str                      # Smooth | Singular | CapExceeded | DimensionMismatch
    witness: Ideal | None = None
    reason: str = ""
    codim: int | None = None
    dimension: int | None = None
    minors: int = 0

    def __bool__(self):
        return self.status == "Smooth"


# --------------------------------------------------------------------------
# emptiness


def _chart(ambient: Ambient, mono: Sequence[int]) -> tuple[list[int], list[int]]:
    """Split the variables of an irrelevant monomial into a torus-independent part and the rest."""
    vars_ = [j for j, e in enumerate(mono) if e]
    chosen: list[int] = []
    rest: list[int] = []
    for j in vars_:
        trial = [ambient.grading.weights[k] for k in chosen + [j]]
        if _rank(trial) == len(chosen) + 1:
            chosen.append(j)
        else:
            rest.append(j)
    return chosen, rest


def _chart_ideal(I: Ideal, ones: Sequence[int]) -> Ideal:
    ring = I.ring
    vals = {j: ring.field.one for j in ones}
    return Ideal(ring, [g.substitute(vals) for g in I.generators])


def _misses_chart(I: Ideal, ambient: Ambient, mono: Sequence[int], budget: Budget) -> bool:
    """V(I) avoids {b != 0}.  Torus-independent variables of b are set to 1;
    any remaining variables are handled with a Rabinowitsch variable."""
    ones, rest = _chart(ambient, mono)
    J = _chart_ideal(I, ones)
    if not rest:
        return is_unit_ideal(J, budget)
    ring = I.ring
    tname = "_t"
    while tname in ring.coords:
        tname += "_"
    R2 = ring.extend([tname])
    t = R2.var(tname)
    prod = R2.one()
    for j in rest:
        prod = prod * R2.var(j)
    gens = [g.change_ring(R2) for g in J.generators] + [t * prod - 1]
    return is_unit_ideal(Ideal(R2, gens), budget)


def _misses_rabinowitsch(I: Ideal, ambient: Ambient, mono: Sequence[int], budget: Budget) -> bool:
    ring = I.ring
    b = MultiPoly(ring, {tuple(mono): ring.field.one})
    return radical_membership(b, I, budget)


def is_empty_valid(V: Variety | Ideal, ambient: Ambient | None = None, budget: Budget | None = None,
                   route: str = "chart") -> bool:
    """True iff V(I) has no valid point, i.e. every irrelevant generator lies in sqrt(I)."""
    if isinstance(V, Variety):
        I, ambient = V.ideal, V.ambient
    else:
        I = V
    budget = budget if budget is not None else Budget()
    if not I.generators:
        return False
    test = _misses_chart if route == "chart" else _misses_rabinowitsch
    gb = groebner_basis(I, GREVLEX, budget)
    if gb.is_unit:
        return True
    for m in ambient.irrelevant:
        b = MultiPoly(I.ring, {m: I.ring.field.one})
        if not normal_form(b, gb):
            continue
        if not test(I, ambient, m, budget):
            return False
    return True


def nonempty_chart(V: Variety, budget: Budget | None = None):
    """First irrelevant generator whose chart meets V, or None."""
    budget = budget if budget is not None else Budget()
    for m in V.ambient.irrelevant:
        if not _misses_chart(V.ideal, V.ambient, m, budget):
            return m
    return None


# --------------------------------------------------------------------------
# invariance and dimension


def is_invariant(V: Variety, matrix: Sequence[Sequence], budget: Budget | None = None,
                 gb: GroebnerBasis | None = None) -> bool:
    """Pullback of every generator along ``matrix`` lies in the saturation of I by the irrelevant ideal."""
    return invariance_failure(V, matrix, gb, budget) is None


def invariance_failure(V: Variety, matrix, gb: GroebnerBasis | None = None, budget: Budget | None = None):
    """The first generator whose pullback leaves I : B^infinity, with its remainder modulo I; else None.

    Membership in I itself is tried first; the saturation (an intersection of
    I : m^infinity over the irrelevant monomials m) is only built when needed.
    """
    gb = gb or groebner_basis(V.ideal, GREVLEX, budget)
    sat: list[GroebnerBasis] | None = None
    for g in V.ideal.generators:
        pb = pullback(g, matrix)
        r = normal_form(pb, gb)
        if not r:
            continue
        if sat is None:
            sat = [groebner_basis(saturate(V.ideal, _monomial(V.ring, m), budget), GREVLEX, budget)
                   for m in V.ambient.irrelevant]
        if any(normal_form(pb, h) for h in sat):
            return g, r
    return None


def _monomial(ring, exps: Sequence[int]) -> MultiPoly:
    out = ring.one()
    for j, e in enumerate(exps):
        for _ in range(e):
            out = out * ring.var(j)
    return out


def dimension_of(V: Variety, budget: Budget | None = None) -> int:
    """Dimension of the valid locus: max over irrelevant charts, minus the residual torus rank."""
    budget = budget if budget is not None else Budget()
    amb = V.ambient
    best = -1
    for m in amb.irrelevant:
        ones, rest = _chart(amb, m)
        J = _chart_ideal(V.ideal, ones)
        if rest:
            prod = V.ring.one()
            for j in rest:
                prod = prod * V.ring.var(j)
            J = saturate(J, prod, budget)
        d = dimension(J, budget)
        if d < 0:
            continue
        # the chart variables set to 1 still count as free; the torus takes away r
        best = max(best, d - amb.rank)
    return best


# --------------------------------------------------------------------------
# smoothness


def linear_section(V: Variety) -> Variety:
    """Eliminate coordinates using linear generators that live in one weight block.

    The result is an isomorphic variety in a smaller ambient of the same kind.
    """
    amb, I = V.ambient, V.ideal
    changed = True
    while changed:
        changed = False
        ring = I.ring
        for g in I.generators:
            if g.total_degree() != 1 or not all(sum(m) == 1 for m in g.terms_dict):
                continue
            vs = sorted(g.variables())
            rows = {amb.grading.weights[j] for j in vs}
            if len(rows) != 1:
                continue
            block = [j for j, r in enumerate(amb.grading.weights) if r == amb.grading.weights[vs[0]]]
            if len(block) <= 1:
                continue
            k = vs[-1]
            e = tuple(1 if j == k else 0 for j in range(ring.nvars))
            c = g.terms_dict[e]
            sol = ring.var(k) - g * (1 / c)          # x_k = sol
            keep = [j for j in range(ring.nvars) if j != k]
            sub = Ring(tuple(ring.coords[j] for j in keep), ring.field)
            gens = []
            for h in I.generators:
                if h is g:
                    continue
                h2 = h.substitute({k: sol})
                if h2:
                    gens.append(h2.change_ring(sub))
            W = Grading([amb.grading.weights[j] for j in keep])
            B = sorted({tuple(m[j] for j in keep) for m in amb.irrelevant if not m[k]})
            strata = []
            for st in amb.singular_strata:
                polys = [ring.parse(s).substitute({k: sol}) for s in st]
                strata.append(tuple(str(p.change_ring(sub)) for p in polys if p))
            amb = Ambient(sub.coords, W, B, strata, kind=amb.kind)
            I = Ideal(sub, gens)
            changed = True
            break
    return Variety(amb, I)


def _jacobian(I: Ideal) -> list[list[MultiPoly]]:
    return [[g.diff(j) for j in range(I.ring.nvars)] for g in I.generators]


def _minors(J: list[list[MultiPoly]], c: int, limit: int) -> list[MultiPoly]:
    """All nonzero c x c minors by Laplace expansion along the first chosen row, memoized."""
    m = len(J)
    n = len(J[0]) if J else 0
    if c <= 0:
        return []
    total = comb(m, c) * comb(n, c)
    if total > limit:
        raise _TooManyMinors(total, limit)
    memo: dict = {}

    def det(rows: tuple[int, ...], cols: tuple[int, ...]) -> MultiPoly:
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            val = J[rows[0]][cols[0]]
        else:
            r0 = rows[0]
            val = J[0][0].ring.zero()
            for idx, cc in enumerate(cols):
                a = J[r0][cc]
                if not a:
                    continue
                sub = det(rows[1:], cols[:idx] + cols[idx + 1:])
                if sub:
                    val = val - a * sub if idx % 2 else val + a * sub
        memo[key] = val
        return val

    out = []
    for rows in itertools.combinations(range(m), c):
        for cols in itertools.combinations(range(n), c):
            d = det(rows, cols)
            if d:
                out.append(d)
    # dedupe up to scalars
    seen, uniq = set(), []
    for d in out:
        k = d.monic()
        if k not in seen:
            seen.add(k)
            uniq.append(k)
    return uniq


class _TooManyMinors(Exception):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit


def is_smooth(V: Variety, tier: str = "fast", budget: Budget | None = None,
              expected_dimension: int | None = None, section: bool = True,
              route: str = "auto") -> SmoothnessVerdict:
    """Jacobian criterion on the valid locus, plus avoidance of the ambient's singular strata.

    ``route="charts"`` skips the global minors and works chart by chart, which
    pays off when the charts are affine spaces after explicit elimination.
    """
    if route not in ("auto", "charts"):
        raise ValueError(f"unknown smoothness route {route!r}")
    minor_cap, mult = TIERS[tier]
    budget = budget if budget is not None else Budget()
    if tier == "full":
        budget.cap *= mult
    try:
        d = dimension_of(V, budget)
        if expected_dimension is not None and d != expected_dimension:
            return SmoothnessVerdict("DimensionMismatch", None,
                                     f"computed dimension {d}, expected {expected_dimension}", dimension=d)
        if d < 0:
            return SmoothnessVerdict("Smooth", reason="empty", dimension=d)
        for S in V.strata_ideals():
            meet = V.ideal + S
            if not is_empty_valid(meet, V.ambient, budget):
                return SmoothnessVerdict("Singular", meet, "meets an ambient singular stratum", dimension=d)
        if route == "charts":
            return _smooth_by_charts(V, d, budget, minor_cap, 0)
        W = linear_section(V) if section else V
        c = W.ambient.dim - d
        Jac = _jacobian(W.ideal)
        try:
            # the empty minor is 1: a section of full dimension is smooth
            minors = _minors(Jac, c, minor_cap) if c > 0 else [W.ideal.ring.one()]
        except _TooManyMinors as e:
            if tier == "full":
                return _smooth_by_charts(V, d, budget, minor_cap, e.count)
            return SmoothnessVerdict("CapExceeded", None,
                                     f"{e.count} Jacobian minors of size {c} exceed the tier limit {e.limit}",
                                     codim=c, dimension=d, minors=e.count)
        sing = W.ideal.with_generators(minors)
        if is_empty_valid(sing, W.ambient, budget):
            return SmoothnessVerdict("Smooth", codim=c, dimension=d, minors=len(minors))
        witness = V.ideal.with_generators(_lift_minors(minors, W, V)) if W is not V else sing
        return SmoothnessVerdict("Singular", witness, "Jacobian rank drops on the valid locus",
                                 codim=c, dimension=d, minors=len(minors))
    except ResourceCapExceeded as e:
        return SmoothnessVerdict("CapExceeded", None, str(e))


def _explicit_variable(g: MultiPoly, protected: set[int]) -> int | None:
    """A variable x with g = c*x + h, c a nonzero constant and x absent from h."""
    n = g.ring.nvars
    for j in sorted(g.variables()):
        if j in protected:
            continue
        e = tuple(1 if k == j else 0 for k in range(n))
        if e in g.terms_dict and all(not m[j] for m in g.terms_dict if m != e):
            return j
    return None


def _eliminate_explicit(gens: list[MultiPoly], protected: set[int],
                        tracked: Sequence[MultiPoly] = ()) -> tuple[list[MultiPoly], set[int], list[MultiPoly]]:
    """Repeatedly solve g = 0 for an explicit variable and substitute; an isomorphism of affine schemes.

    ``tracked`` polynomials receive the same substitutions.
    """
    gens = [g for g in gens if g]
    tracked = list(tracked)
    removed: set[int] = set()
    while True:
        pick = None
        for g in sorted(gens, key=len):
            j = _explicit_variable(g, protected | removed)
            if j is not None:
                pick = (g, j)
                break
        if pick is None:
            return gens, removed, tracked
        g, j = pick
        ring = g.ring
        e = tuple(1 if k == j else 0 for k in range(ring.nvars))
        sol = ring.var(j) - g * (1 / g.terms_dict[e])
        gens = [h2 for h in gens if h is not g for h2 in (h.substitute({j: sol}),) if h2]
        tracked = [t.substitute({j: sol}) for t in tracked]
        removed.add(j)


def _unit_off(gens: list[MultiPoly], rest: Sequence[int], budget: Budget) -> bool:
    """No common zero of ``gens`` with all coordinates in ``rest`` nonzero."""
    if not gens:
        return False
    ring = gens[0].ring
    if not rest:
        return is_unit_ideal(Ideal(ring, gens), budget)
    tname = "_t"
    while tname in ring.coords:
        tname += "_"
    R2 = ring.extend([tname])
    prod = R2.one()
    for j in rest:
        prod = prod * R2.var(j)
    return is_unit_ideal(Ideal(R2, [g.change_ring(R2) for g in gens] + [R2.var(tname) * prod - 1]), budget)


def _smooth_by_charts(V: Variety, d: int, budget: Budget, limit: int, global_count: int) -> SmoothnessVerdict:
    """Jacobian criterion chart by chart after eliminating explicitly solvable variables.

    On the chart of an irrelevant monomial, coordinates that some generator
    expresses as a polynomial in the others are substituted away; the
    remaining system has far fewer equations and unknowns.  Points already
    covered by earlier charts are cut out of the emptiness test (not of the
    Jacobian, which stays that of the open chart).
    """
    total = 0
    ring = V.ring
    covered: list[MultiPoly] = []
    for mono in V.ambient.irrelevant:
        ones, rest = _chart(V.ambient, mono)
        J = _chart_ideal(V.ideal, ones)
        vals = {j: ring.field.one for j in ones}
        earlier = [b.substitute(vals) for b in covered]
        covered.append(MultiPoly(ring, {tuple(mono): ring.field.one}))
        if any(b.is_constant() and b for b in earlier):
            continue
        # elimination is an isomorphism of the chart, so test emptiness afterwards
        gens, removed, earlier = _eliminate_explicit(list(J.generators), set(ones) | set(rest), earlier)
        if _unit_off(gens + earlier, rest, budget):
            continue
        free = [j for j in range(ring.nvars) if j not in ones and j not in removed]
        c = len(free) - d
        jac = [[g.diff(j) for j in free] for g in gens]
        try:
            minors = _minors(jac, c, limit) if c > 0 else [V.ideal.ring.one()]
        except _TooManyMinors as e:
            return SmoothnessVerdict("CapExceeded", None,
                                     f"{global_count} global minors; a chart still needs {e.count} "
                                     f"minors of size {c}", codim=c, dimension=d, minors=e.count)
        total += len(minors)
        if c > 0 and not _unit_off(gens + minors + earlier, rest, budget):
            name = ",".join(V.ambient.coords[j] for j in ones)
            return SmoothnessVerdict("Singular", Ideal(ring, gens + minors + earlier),
                                     f"Jacobian rank drops on the chart {name} = 1", codim=c, dimension=d,
                                     minors=total)
    return SmoothnessVerdict("Smooth", reason="chart-wise elimination", dimension=d, minors=total)


def _lift_minors(minors: list[MultiPoly], W: Variety, V: Variety) -> list[MultiPoly]:
    return [m.change_ring(V.ring) for m in minors]
