"""Buchberger Groebner bases over Q(zeta_N) and the ideal operations built on them.

Internally a polynomial is a list of ``(key, packed, coeff)`` triples sorted by
decreasing key.  ``packed`` stores the exponent vector in 16-bit fields with a
guard bit, so monomial products are integer additions and divisibility is one
subtraction and a mask.  ``key`` is the linear order key from
:meth:`MonomialOrder.weights`, which is additive as well.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cyclotomic import CyclotomicField, CyclotomicNumber
from .poly import GREVLEX, MonomialOrder, MultiPoly, Ring

__all__ = [
    "ResourceCapExceeded",
    "Budget",
    "Ideal",
    "GroebnerBasis",
    "groebner_basis",
    "normal_form",
    "radical_membership",
    "eliminate",
    "dimension",
    "intersect",
    "saturate",
    "is_unit_ideal",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 200_000

_BITS = 16
_FIELD = (1 << _BITS) - 1
_GUARD_BIT = 1 << (_BITS - 1)


class ResourceCapExceeded(RuntimeError):
    """The pair-reduction budget ran out: an expensive tier is required."""

    def __init__(self, used: int, cap: int):
        self.used = used
        self.cap = cap
        super().__init__(f"resource cap exceeded after {used} pair reductions (cap {cap}); expensive tier required")


@dataclass
class Budget:
    """Pair-reduction budget shared by every basis computation in one claim."""

    cap: int = DEFAULT_CAP
    used: int = 0
    bases: int = 0

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.cap:
            raise ResourceCapExceeded(self.used, self.cap)


# --------------------------------------------------------------------------
# packed monomials


class _Packing:
    def __init__(self, nvars: int):
        self.n = nvars
        self.shifts = [_BITS * i for i in range(nvars)]
        self.guard = sum(_GUARD_BIT << s for s in self.shifts)

    def pack(self, exps: Sequence[int]) -> int:
        p = 0
        for e, s in zip(exps, self.shifts):
            if e:
                if e >= _GUARD_BIT:
                    raise OverflowError("exponent too large")
                p |= e << s
        return p

    def unpack(self, p: int) -> tuple[int, ...]:
        return tuple((p >> s) & _FIELD for s in self.shifts)

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        out = 0
        for s in self.shifts:
            x = (a >> s) & _FIELD
            y = (b >> s) & _FIELD
            out |= (x if x > y else y) << s
        return out

    def coprime(self, a: int, b: int) -> bool:
        for s in self.shifts:
            if (a >> s) & _FIELD and (b >> s) & _FIELD:
                return False
        return True

    def degree(self, p: int) -> int:
        return sum((p >> s) & _FIELD for s in self.shifts)


class _Kernel:
    """Order-specific conversion and reduction machinery."""

    def __init__(self, nvars: int, order: MonomialOrder):
        self.pk = _Packing(nvars)
        self.w = order.weights(nvars)

    def key(self, exps) -> int:
        return sum(e * c for e, c in zip(exps, self.w) if e)

    def to_internal(self, p: MultiPoly) -> list:
        pk, key = self.pk, self.key
        out = [(key(m), pk.pack(m), c) for m, c in p.terms_dict.items()]
        out.sort(key=lambda t: t[0], reverse=True)
        return out

    def to_poly(self, f: list, ring: Ring) -> MultiPoly:
        un = self.pk.unpack
        return MultiPoly(ring, {un(P): c for _, P, c in f})

    @staticmethod
    def monic(f: list) -> list:
        c = f[0][2]
        if c == 1:
            return f
        inv = 1 / c
        return [(k, P, v * inv) for k, P, v in f]

    @staticmethod
    def axpy(f: list, start: int, g: list, c, sP: int, sk: int) -> list:
        """f[start:] - c * x^s * g[1:], merged; g monic and its head cancels f[start-1]."""
        out = []
        append = out.append
        i, j = start, 1
        nf, ng = len(f), len(g)
        while i < nf and j < ng:
            fk = f[i][0]
            gt = g[j]
            gk = gt[0] + sk
            if fk > gk:
                append(f[i])
                i += 1
            elif fk < gk:
                append((gk, gt[1] + sP, -c * gt[2]))
                j += 1
            else:
                v = f[i][2] - c * gt[2]
                if v:
                    append((fk, f[i][1], v))
                i += 1
                j += 1
        if i < nf:
            out.extend(f[i:])
        while j < ng:
            gt = g[j]
            append((gt[0] + sk, gt[1] + sP, -c * gt[2]))
            j += 1
        return out

    def reduce_fast(self, f: list, basis: Sequence[list]) -> list:
        """Full normal form with a single remainder pass (avoids repeated list slicing)."""
        divides = self.pk.divides
        heads = [(g[0][1], g[0][0], g) for g in basis]
        rem = []
        start = 0
        while start < len(f):
            k, P, c = f[start]
            for gP, gk, g in heads:
                if divides(gP, P):
                    f = self.axpy(f, start + 1, g, c, P - gP, k - gk)
                    start = 0
                    break
            else:
                rem.append(f[start])
                start += 1
        return rem


# --------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    generators: tuple[MultiPoly, ...]

    def __init__(self, ring: Ring, generators: Iterable[MultiPoly] = ()):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring.coords != ring.coords:
                g = g.change_ring(ring)
            if g:
                gens.append(g)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + tuple(g.change_ring(self.ring) for g in other.generators))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def with_generators(self, more: Iterable[MultiPoly]) -> "Ideal":
        return Ideal(self.ring, self.generators + tuple(more))

    def change_ring(self, ring: Ring) -> "Ideal":
        return Ideal(ring, [g.change_ring(ring) for g in self.generators])

    def __repr__(self):
        return f"Ideal<{', '.join(str(g) for g in self.generators)}>"


class GroebnerBasis:
    """Reduced Groebner basis for a fixed monomial order."""

    def __init__(self, ring: Ring, order: MonomialOrder, internal: list, kernel: _Kernel):
        self.ring = ring
        self.order = order
        self._internal = internal
        self._kernel = kernel
        self.basis = [kernel.to_poly(f, ring) for f in internal]

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"GroebnerBasis({self.order}, [{', '.join(str(g) for g in self.basis)}])"

    @property
    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def leading_monomials(self) -> list[tuple[int, ...]]:
        un = self._kernel.pk.unpack
        return [un(f[0][1]) for f in self._internal]

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return normal_form(f, self)

    def contains(self, f: MultiPoly) -> bool:
        return not normal_form(f, self)

    def s_polynomials_reduce_to_zero(self) -> bool:
        """Buchberger criterion on the returned basis (post-hoc audit)."""
        k = self._kernel
        G = self._internal
        for a, b in itertools.combinations(range(len(G)), 2):
            s = _s_poly(k, G[a], G[b])
            if s and k.reduce_fast(s, G):
                return False
        return True


def _s_poly(k: _Kernel, f: list, g: list) -> list:
    pk = k.pk
    L = pk.lcm(f[0][1], g[0][1])
    kl = k.key(pk.unpack(L))
    sf, sg = L - f[0][1], L - g[0][1]
    fk, gk = kl - f[0][0], kl - g[0][0]
    left = [(a + fk, P + sf, c) for a, P, c in f[1:]]
    # left - x^sg * g[1:]; both monic so the heads cancel
    return k.axpy(left, 0, [(0, 0, 1)] + g[1:], 1, sg, gk)


def _descend(polys: Sequence[MultiPoly]) -> bool:
    for p in polys:
        for c in p.terms_dict.values():
            if isinstance(c, CyclotomicNumber) and not c.is_rational():
                return False
    return True


def _to_rational_ring(polys: Sequence[MultiPoly], ring: Ring) -> tuple[Ring, list[MultiPoly]]:
    qring = Ring(ring.coords, CyclotomicField(1))
    out = []
    for p in polys:
        out.append(MultiPoly(qring, {m: (c.coeffs[0] if isinstance(c, CyclotomicNumber) else c)
                                     for m, c in p.terms_dict.items()}))
    return qring, out


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``I``.

    Buchberger's algorithm with the Gebauer-Moeller installation of the product
    and chain criteria, normal selection strategy (smallest lcm degree, ties by
    the order).  Each S-pair reduction is charged to ``budget``.
    """
    budget = budget if budget is not None else Budget()
    budget.bases += 1
    ring = I.ring
    gens = list(I.generators)
    work_ring = ring
    if not ring.field.rational and _descend(gens):
        work_ring, gens = _to_rational_ring(gens, ring)
    k = _Kernel(ring.nvars, order)
    polys = [k.monic(k.to_internal(g)) for g in gens if g]
    internal = _buchberger(k, polys, budget)
    gb = GroebnerBasis(work_ring, order, internal, k)
    if work_ring is not ring:
        fld = ring.field
        gb.ring = ring
        gb._internal = [[(a, P, fld.coerce(c)) for a, P, c in f] for f in internal]
        gb.basis = [b.map_coefficients(fld.coerce, ring) for b in gb.basis]
    return gb


def _buchberger(k: _Kernel, polys: list, budget: Budget) -> list:
    pk = k.pk
    if not polys:
        return []
    # constant generator: unit ideal
    for f in polys:
        if f[0][1] == 0:
            return [[(0, 0, f[0][2] / f[0][2])]]
    # inter-reduce the input a little: sort by leading key ascending
    polys.sort(key=lambda f: f[0][0])
    G: list[list] = []          # all basis candidates, indexed
    active: list[int] = []      # indices currently in the basis
    pairs: list[tuple] = []     # (deg, key, i, j)

    def add(h: list):
        nonlocal active, pairs
        idx = len(G)
        G.append(h)
        hP = h[0][1]
        # Gebauer-Moeller update
        C = [(g, pk.lcm(hP, G[g][0][1])) for g in active]
        D = []
        while C:
            g1, l1 = C.pop(0)
            if pk.coprime(hP, G[g1][0][1]):
                D.append((g1, l1))
                continue
            if any(pk.divides(l2, l1) for _, l2 in C) or any(pk.divides(l2, l1) for _, l2 in D):
                continue
            D.append((g1, l1))
        E = [(g, l) for g, l in D if not pk.coprime(hP, G[g][0][1])]
        kept = []
        for p in pairs:
            _, _, i, j, L = p
            if pk.divides(hP, L):
                lih = pk.lcm(G[i][0][1], hP)
                ljh = pk.lcm(G[j][0][1], hP)
                if lih != L and ljh != L:
                    continue
            kept.append(p)
        for g, L in E:
            kept.append((pk.degree(L), k.key(pk.unpack(L)), g, idx, L))
        pairs = kept
        active = [g for g in active if not pk.divides(hP, G[g][0][1])] + [idx]

    for f in polys:
        h = k.reduce_fast(f, [G[a] for a in active])
        if not h:
            continue
        h = k.monic(h)
        if h[0][1] == 0:
            return [[(0, 0, h[0][2])]]
        add(h)

    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1]))
        _, _, i, j, _ = pairs.pop(best)
        budget.spend()
        s = _s_poly(k, G[i], G[j])
        if not s:
            continue
        h = k.reduce_fast(s, [G[a] for a in active])
        if not h:
            continue
        h = k.monic(h)
        if h[0][1] == 0:
            return [[(0, 0, h[0][2])]]
        add(h)

    # reduce: drop redundant heads, then tail-reduce each element
    basis = [G[a] for a in active]
    basis = [f for f in basis if not any(g is not f and pk.divides(g[0][1], f[0][1]) for g in basis)]
    reduced = []
    for idx, f in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        tail = k.reduce_fast(f[1:], others) if len(f) > 1 else []
        reduced.append([f[0]] + tail)
    reduced.sort(key=lambda f: f[0][0], reverse=True)
    return reduced


def normal_form(f: MultiPoly, G: GroebnerBasis) -> MultiPoly:
    """Remainder of ``f`` with no term divisible by a leading term of ``G``."""
    if f.ring.coords != G.ring.coords:
        f = f.change_ring(G.ring)
    k = G._kernel
    return k.to_poly(k.reduce_fast(k.to_internal(f), G._internal), G.ring)


def is_unit_ideal(I: Ideal, budget: Budget | None = None) -> bool:
    return groebner_basis(I, GREVLEX, budget).is_unit


def radical_membership(f: MultiPoly, I: Ideal, budget: Budget | None = None) -> bool:
    """f in sqrt(I), decided by 1 in I + <t f - 1> with a fresh variable t."""
    if not f:
        return True
    tname = _fresh(I.ring, "_t")
    ring = I.ring.extend([tname])
    t = ring.var(tname)
    gens = [g.change_ring(ring) for g in I.generators] + [t * f.change_ring(ring) - 1]
    return is_unit_ideal(Ideal(ring, gens), budget)


def _fresh(ring: Ring, base: str) -> str:
    name, k = base, 0
    while name in ring.coords:
        k += 1
        name = f"{base}{k}"
    return name


def eliminate(I: Ideal, drop: Sequence, budget: Budget | None = None) -> Ideal:
    """I intersected with the subring without ``drop`` (block order, dropped variables greatest)."""
    ring = I.ring
    drop_idx = sorted({ring.index(d) if isinstance(d, str) else d for d in drop})
    keep_names = [c for i, c in enumerate(ring.coords) if i not in drop_idx]
    sub = Ring(tuple(keep_names), ring.field)
    if not drop_idx:
        gb = groebner_basis(I, GREVLEX, budget)
        return Ideal(ring, gb.basis)
    order = MonomialOrder.elimination(drop_idx, ring.nvars)
    gb = groebner_basis(I, order, budget)
    dropped = set(drop_idx)
    out = [g for g in gb.basis if not (g.variables() & dropped)]
    return Ideal(sub, [g.change_ring(sub) for g in out])


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    """I cap J via elimination of t from t I + (1 - t) J."""
    tname = _fresh(I.ring, "_s")
    ring = I.ring.extend([tname])
    t = ring.var(tname)
    gens = [t * g.change_ring(ring) for g in I.generators]
    gens += [(1 - t) * g.change_ring(ring) for g in J.generators]
    out = eliminate(Ideal(ring, gens), [tname], budget)
    return Ideal(I.ring, [g.change_ring(I.ring) for g in out.generators])


def saturate(I: Ideal, f: MultiPoly, budget: Budget | None = None) -> Ideal:
    """I : f^infinity via elimination of t from I + <1 - t f>."""
    tname = _fresh(I.ring, "_u")
    ring = I.ring.extend([tname])
    t = ring.var(tname)
    gens = [g.change_ring(ring) for g in I.generators] + [1 - t * f.change_ring(ring)]
    out = eliminate(Ideal(ring, gens), [tname], budget)
    return Ideal(I.ring, [g.change_ring(I.ring) for g in out.generators])


def _max_independent_size(heads: list[frozenset], nvars: int) -> int:
    best = 0

    def ok(S: frozenset) -> bool:
        return not any(h <= S for h in heads)

    def search(start: int, S: frozenset):
        nonlocal best
        if len(S) + (nvars - start) <= best:
            return
        best = max(best, len(S))
        for v in range(start, nvars):
            T = S | {v}
            if ok(T):
                search(v + 1, T)

    search(0, frozenset())
    return best


def dimension(I: Ideal, budget: Budget | None = None, gb: GroebnerBasis | None = None) -> int:
    """Krull dimension of the affine variety V(I); -1 when V(I) is empty."""
    gb = gb or groebner_basis(I, GREVLEX, budget)
    if gb.is_unit:
        return -1
    heads = [frozenset(i for i, e in enumerate(m) if e) for m in gb.leading_monomials()]
    return _max_independent_size(heads, I.ring.nvars)
