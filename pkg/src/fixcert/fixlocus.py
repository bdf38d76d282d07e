"""Fixed loci of finite groups of graded automorphisms, and emptiness on a variety.

Three engines build the locus of points fixed by every generator:

* ``minors``: per weight block, the image block is proportional to the original
  block; 2x2 minors.  Exact on ambients whose coordinates all carry unit
  weight vectors.
* ``elimination``: M x = D(lambda) x with auxiliary torus variables, which are
  then eliminated.  Works everywhere; the result can be larger than the true
  fixed locus (its closure), so only an empty answer is final.
* ``eigenspace``: for generators that preserve every block, the fixed locus is
  a union of products of projectivised joint eigenspaces.  Each component is
  tested by substituting its parametrisation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .autgroup import AutElement
from .geometry import Ambient, Variety, is_empty_valid, is_invariant
from .groebner import Budget, Ideal, ResourceCapExceeded, eliminate, groebner_basis, radical_membership
from .poly import GREVLEX, Ring

__all__ = [
    "FixedLocusIdeal",
    "LinearComponent",
    "FixVerdict",
    "PreconditionError",
    "fix_ideal_minors",
    "fix_ideal_elimination",
    "eigenspace_components",
    "verify_no_fixed_points",
    "verify_fixed_point_witness",
    "ENGINES",
    "COMPONENT_CAP",
]

ENGINES = ("auto", "minors", "elimination", "eigenspace")
COMPONENT_CAP = 4096


class PreconditionError(ValueError):
    """The requested engine does not apply to this ambient or generator set."""


@dataclass
class FixedLocusIdeal:
    ideal: Ideal
    engine: str
    exactness: str     # exact | closure-upper-bound


@dataclass
class LinearComponent:
    """Product of linear subspaces, one basis (list of column vectors) per block."""

    blocks: list[list[int]]
    bases: list[list[list]]

    @property
    def dims(self) -> list[int]:
        return [len(b) for b in self.bases]

    def describe(self, coords: Sequence[str]) -> str:
        parts = []
        for blk, basis in zip(self.blocks, self.bases):
            vecs = ["(" + ", ".join(str(v) for v in vec) + ")" for vec in basis]
            parts.append("span{" + ", ".join(vecs) + "} in " + ",".join(coords[j] for j in blk))
        return " x ".join(parts)


@dataclass
class FixVerdict:
    status: str                         # Empty | Nonempty | CapExceeded | InvarianceFailed | Inconclusive
    engine: str
    exactness: str = "exact"
    components: int | None = None
    witness: str = ""
    detail: str = ""
    fallbacks: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.status == "Empty"


# --------------------------------------------------------------------------
# linear algebra over the job field


def _rref(rows: list[list], fld) -> list[list]:
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    n = len(A[0])
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [a * inv for a in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return A[:r]


def _nullspace(rows: list[list], n: int, fld) -> list[list]:
    R = _rref(rows, fld)
    pivots = []
    for row in R:
        pivots.append(next(c for c, a in enumerate(row) if a))
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [fld.zero] * n
        v[f] = fld.one
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def _span_key(basis: list[list], fld) -> tuple:
    return tuple(tuple(r) for r in _rref(basis, fld))


# --------------------------------------------------------------------------
# engines


def _require_unit_weights(ambient: Ambient, engine: str):
    if not ambient.unit_weighted():
        raise PreconditionError(f"{engine} engine needs every coordinate to carry a unit weight vector")


def fix_ideal_minors(g: AutElement, ambient: Ambient, ring: Ring) -> FixedLocusIdeal:
    """2x2 minors of [x_b ; (M x)_b] for every weight block b."""
    _require_unit_weights(ambient, "minors")
    M = g.matrix
    X = ring.gens()
    images = []
    for row in M:
        form = ring.zero()
        for k, a in enumerate(row):
            if a:
                form = form + X[k] * a
        images.append(form)
    gens = []
    for blk in ambient.blocks():
        for a, b in itertools.combinations(blk, 2):
            m = X[a] * images[b] - X[b] * images[a]
            if m:
                gens.append(m)
    return FixedLocusIdeal(Ideal(ring, gens), "minors", "exact")


def fix_ideal_elimination(g: AutElement, ambient: Ambient, ring: Ring,
                          budget: Budget | None = None) -> FixedLocusIdeal:
    """Eliminate lambda, mu from M x = D(lambda) x, lambda_i mu_i = 1."""
    r = ambient.rank
    lam = [f"_l{i}" for i in range(r)]
    mu = [f"_m{i}" for i in range(r)]
    R2 = ring.extend(lam + mu)
    gens = _torus_conditions(R2, g, ambient, lam, mu)
    out = eliminate(Ideal(R2, gens), lam + mu, budget)
    return FixedLocusIdeal(out.change_ring(ring), "elimination", "closure-upper-bound")


def _eigenspaces(Mb: list[list], fld) -> list[list[list]]:
    """Eigenspaces of a block matrix for eigenvalues among the field's roots of unity."""
    n = len(Mb)
    spaces = []
    total = 0
    for alpha in fld.roots_of_unity():
        rows = [[Mb[i][j] - (alpha if i == j else fld.zero) for j in range(n)] for i in range(n)]
        ker = _nullspace(rows, n, fld)
        if ker:
            spaces.append(ker)
            total += len(ker)
    if total != n:
        raise PreconditionError("block is not diagonalisable over the roots of unity of the job field")
    return spaces


def eigenspace_components(generators: Sequence[AutElement], ambient: Ambient, fld,
                          cap: int = COMPONENT_CAP) -> list[LinearComponent]:
    """Complete list of linear components whose union is the common fixed locus."""
    _require_unit_weights(ambient, "eigenspace")
    blocks = ambient.blocks()
    for g in generators:
        if g.permutes_blocks(blocks):
            raise PreconditionError("eigenspace engine needs generators that preserve every block")
    per_block = []
    for blk in blocks:
        n = len(blk)
        ident = [[fld.one if i == j else fld.zero for j in range(n)] for i in range(n)]
        current = [ident]      # list of bases
        for g in generators:
            Mb = [[g.matrix[a][b] for b in blk] for a in blk]
            spaces = _eigenspaces(Mb, fld)
            nxt = {}
            for S in current:
                for E in spaces:
                    inter = _intersect(S, E, n, fld)
                    if inter:
                        key = _span_key(inter, fld)
                        nxt.setdefault(key, [list(r) for r in key])
            current = list(nxt.values())
            if len(current) > cap:
                raise PreconditionError(f"more than {cap} components in one block")
        per_block.append(current)
    count = 1
    for c in per_block:
        count *= len(c)
    if count > cap:
        raise PreconditionError(f"{count} components exceed the cap {cap}")
    return [LinearComponent(blocks, list(choice)) for choice in itertools.product(*per_block)]


def _intersect(S: list[list], E: list[list], n: int, fld) -> list[list]:
    """Basis of span(S) cap span(E)."""
    # solve S a = E b
    k, m = len(S), len(E)
    rows = []
    for i in range(n):
        rows.append([S[c][i] for c in range(k)] + [-E[c][i] for c in range(m)])
    ker = _nullspace(rows, k + m, fld)
    out = []
    for v in ker:
        vec = [sum((v[c] * S[c][i] for c in range(k) if v[c]), fld.zero) for i in range(n)]
        out.append(vec)
    return [list(r) for r in _rref(out, fld)]


def _component_meets(V: Variety, comp: LinearComponent, budget: Budget) -> bool:
    fld = V.ring.field
    names, pblocks, images = [], [], [None] * V.ring.nvars
    for b, (blk, basis) in enumerate(zip(comp.blocks, comp.bases)):
        pblocks.append([f"t{b}_{k}" for k in range(len(basis))])
        names += pblocks[-1]
    P = Ring(tuple(names), fld)
    T = {n: P.var(n) for n in names}
    for blk, basis, pn in zip(comp.blocks, comp.bases, pblocks):
        for local, j in enumerate(blk):
            form = P.zero()
            for vec, tn in zip(basis, pn):
                if vec[local]:
                    form = form + T[tn] * vec[local]
            images[j] = form
    gens = [g.compose(images, P) for g in V.ideal.generators]
    gens = [g for g in gens if g]
    amb = Ambient.product(pblocks)
    if not gens:
        return True
    return not is_empty_valid(Ideal(P, gens), amb, budget)


# --------------------------------------------------------------------------
# verification


def _choose_engine(V: Variety, generators: Sequence[AutElement]) -> str:
    amb = V.ambient
    if not amb.unit_weighted():
        return "elimination"
    blocks = amb.blocks()
    if any(g.permutes_blocks(blocks) for g in generators):
        return "minors"
    return "eigenspace"


def fixed_locus_ideal(V: Variety, generators: Sequence[AutElement], engine: str,
                      budget: Budget | None = None) -> FixedLocusIdeal:
    ring = V.ring
    gens, exact = [], "exact"
    for g in generators:
        if engine == "minors":
            F = fix_ideal_minors(g, V.ambient, ring)
        else:
            F = fix_ideal_elimination(g, V.ambient, ring, budget)
            exact = F.exactness
        gens += list(F.ideal.generators)
    return FixedLocusIdeal(Ideal(ring, gens), engine, exact)


def verify_no_fixed_points(V: Variety, generators: Sequence[AutElement], engine: str = "auto",
                           budget: Budget | None = None, check_invariance: bool = True) -> FixVerdict:
    """Empty iff no valid point of V is fixed by every generator."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    budget = budget if budget is not None else Budget()
    try:
        if check_invariance:
            gb = groebner_basis(V.ideal, GREVLEX, budget)
            for g in generators:
                if not is_invariant(V, g.matrix, budget, gb=gb):
                    return FixVerdict("InvarianceFailed", engine, detail=f"generator {g.label or '?'} does not preserve V")
        chosen = _choose_engine(V, generators) if engine == "auto" else engine
        fallbacks: list[str] = []
        if chosen == "eigenspace":
            try:
                return _run_eigenspace(V, generators, budget)
            except PreconditionError as e:
                if engine != "auto":
                    raise
                fallbacks.append(f"eigenspace: {e}")
                chosen = "minors" if V.ambient.unit_weighted() else "elimination"
        if chosen == "minors":
            try:
                out = _run_ideal(V, generators, "minors", budget)
                out.fallbacks = fallbacks
                return out
            except PreconditionError as e:
                if engine != "auto":
                    raise
                fallbacks.append(f"minors: {e}")
                chosen = "elimination"
        out = _run_ideal(V, generators, "elimination", budget)
        if out.status == "Nonempty":
            out.status = "Inconclusive"
            out.detail = "inconclusive-closure: the eliminated ideal may exceed the fixed locus"
            if V.ambient.unit_weighted():
                exact = _run_ideal(V, generators, "minors", budget)
                exact.fallbacks = fallbacks + ["elimination: nonempty closure, escalated to minors"]
            else:
                exact = _run_graph(V, generators, budget)
                exact.fallbacks = fallbacks + ["elimination: nonempty closure, escalated to the torus graph"]
            return exact
        out.fallbacks = fallbacks
        return out
    except ResourceCapExceeded as e:
        return FixVerdict("CapExceeded", engine, detail=str(e))


def _run_ideal(V: Variety, generators, engine: str, budget: Budget) -> FixVerdict:
    F = fixed_locus_ideal(V, generators, engine, budget)
    J = V.ideal + F.ideal
    if is_empty_valid(J, V.ambient, budget):
        return FixVerdict("Empty", engine, F.exactness)
    return FixVerdict("Nonempty", engine, F.exactness, witness=str(J))


def _torus_conditions(R2: Ring, g: AutElement, ambient: Ambient, lam: list[str], mu: list[str]) -> list:
    L = [R2.var(n) for n in lam]
    U = [R2.var(n) for n in mu]
    X = [R2.var(j) for j in range(ambient.nvars)]
    out = [l * u - 1 for l, u in zip(L, U)]
    for j, row in enumerate(g.matrix):
        lhs = R2.zero()
        for k, a in enumerate(row):
            if a:
                lhs = lhs + X[k] * a
        chi = R2.one()
        for i, e in enumerate(ambient.grading.weights[j]):
            if e > 0:
                chi = chi * L[i] ** e
            elif e < 0:
                chi = chi * U[i] ** (-e)
        diff = lhs - chi * X[j]
        if diff:
            out.append(diff)
    return out


def _run_graph(V: Variety, generators, budget: Budget) -> FixVerdict:
    """Exact test on the graph {(x, lambda_g) : M_g x = D(lambda_g) x} without projecting."""
    r = V.ambient.rank
    extra, per_gen = [], []
    for t in range(len(generators)):
        lam = [f"_l{t}_{i}" for i in range(r)]
        mu = [f"_m{t}_{i}" for i in range(r)]
        per_gen.append((lam, mu))
        extra += lam + mu
    R2 = V.ring.extend(extra)
    gens = [g.change_ring(R2) for g in V.ideal.generators]
    for g, (lam, mu) in zip(generators, per_gen):
        gens += _torus_conditions(R2, g, V.ambient, lam, mu)
    K = Ideal(R2, gens)
    for m in V.ambient.irrelevant:
        b = R2.var(0) ** 0
        for j, e in enumerate(m):
            if e:
                b = b * R2.var(j) ** e
        if not radical_membership(b, K, budget):
            return FixVerdict("Nonempty", "elimination", "exact", witness=f"{K} meets the chart {b}")
    return FixVerdict("Empty", "elimination", "exact")


def _run_eigenspace(V: Variety, generators, budget: Budget) -> FixVerdict:
    comps = eigenspace_components(generators, V.ambient, V.ring.field)
    for comp in comps:
        if _component_meets(V, comp, budget):
            return FixVerdict("Nonempty", "eigenspace", "exact", len(comps),
                              witness=comp.describe(V.ambient.coords))
    return FixVerdict("Empty", "eigenspace", "exact", len(comps))


def verify_fixed_point_witness(V: Variety, generators: Sequence[AutElement], point: Sequence) -> bool:
    """The point is valid, lies on V, and every generator maps it into its torus orbit."""
    fld = V.ring.field
    pt = [fld.coerce(x) for x in point]
    if not V.ambient.is_valid_point(pt) or not V.contains_point(pt):
        return False
    return all(_torus_equivalent(g.apply(pt), pt, V.ambient, fld) for g in generators)


def _torus_equivalent(q: Sequence, p: Sequence, ambient: Ambient, fld) -> bool:
    """Is there lambda with q_j = chi_j(lambda) p_j for all j?"""
    r = ambient.rank
    names = [f"l{i}" for i in range(r)] + [f"m{i}" for i in range(r)]
    R = Ring(tuple(names), fld)
    L = [R.var(i) for i in range(r)]
    U = [R.var(r + i) for i in range(r)]
    gens = [l * u - 1 for l, u in zip(L, U)]
    for j, (a, b) in enumerate(zip(q, p)):
        chi = R.one()
        for i, e in enumerate(ambient.grading.weights[j]):
            if e > 0:
                chi = chi * L[i] ** e
            elif e < 0:
                chi = chi * U[i] ** (-e)
        d = R.const(a) - chi * b
        if d:
            gens.append(d)
    return not groebner_basis(Ideal(R, gens)).is_unit
