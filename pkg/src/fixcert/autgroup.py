"""Linear automorphisms of a graded ambient modulo its torus, and finite groups of them.

A matrix M acts on points by p -> M p and on polynomials by f -> f(M x).
Two matrices differing by left multiplication with a torus element D(lambda)
give the same automorphism; :func:`canonicalize` picks the representative
whose pivot rows have leading entry 1.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .cyclotomic import CyclotomicField
from .poly import Grading, Ring, parse_linear_forms

__all__ = [
    "AutElement",
    "FiniteGroup",
    "AbelianType",
    "NotAbelian",
    "GradingError",
    "GroupTooLarge",
    "canonicalize",
    "close_group",
    "abelian_type",
    "parse_generator",
    "invariant_factors_from_primary",
    "primary_factors",
    "DEFAULT_GROUP_CAP",
]

DEFAULT_GROUP_CAP = 1024


class GradingError(ValueError):
    """The matrix does not respect the grading, or is singular."""


class GroupTooLarge(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"group not finite within cap {cap}")


def _matmul(A, B, fld):
    n = len(A)
    zero = fld.zero
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(n):
            s = zero
            for k in range(n):
                a = Ai[k]
                if a:
                    b = B[k][j]
                    if b:
                        s = s + a * b
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def _det_nonzero(M, fld) -> bool:
    n = len(M)
    A = [list(r) for r in M]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return False
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return True


def _inverse(M, fld):
    n = len(M)
    A = [list(M[i]) + [fld.one if j == i else fld.zero for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if A[i][c])
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return tuple(tuple(r[n:]) for r in A)


def _weight_map(M, grading: Grading) -> list[list[int]]:
    """Integer matrix L with L w(j) = w(k) for every nonzero entry M[j][k], or GradingError."""
    W = grading.weights
    r = grading.rank
    piv = grading.pivots()
    if any(p is None for p in piv):
        raise GradingError("every torus factor needs a pivot coordinate of unit weight")
    cols = []
    for i, p in enumerate(piv):
        targets = {W[k] for k, a in enumerate(M[p]) if a}
        if len(targets) != 1:
            raise GradingError(f"row {p} mixes coordinates of different weights")
        cols.append(next(iter(targets)))
    L = [[cols[i][a] for i in range(r)] for a in range(r)]
    for j, row in enumerate(M):
        img = tuple(sum(L[a][i] * W[j][i] for i in range(r)) for a in range(r))
        for k, a in enumerate(row):
            if a and W[k] != img:
                raise GradingError(f"row {j} is not homogeneous of the weight predicted by the pivot rows")
    return L


@dataclass(frozen=True)
class AutElement:
    """Canonical matrix of a graded automorphism modulo the torus."""

    matrix: tuple[tuple, ...]
    grading: Grading = field(compare=False, repr=False)
    fld: CyclotomicField = field(compare=False, repr=False)
    label: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def __mul__(self, other: "AutElement") -> "AutElement":
        """(g * h)(p) = g(h(p))."""
        return canonicalize(_matmul(self.matrix, other.matrix, self.fld), self.grading, self.fld)

    def inverse(self) -> "AutElement":
        return canonicalize(_inverse(self.matrix, self.fld), self.grading, self.fld)

    def is_identity(self) -> bool:
        return all((a == 1) if i == j else (not a)
                   for i, row in enumerate(self.matrix) for j, a in enumerate(row))

    def __pow__(self, k: int) -> "AutElement":
        if k < 0:
            return self.inverse() ** (-k)
        result = identity(self.grading, self.fld)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, point: Sequence) -> list:
        return [sum((a * x for a, x in zip(row, point) if a and x), self.fld.zero) for row in self.matrix]

    def permutes_blocks(self, blocks: Sequence[Sequence[int]]) -> bool:
        """True when some block of coordinates is sent to a different block."""
        where = {j: b for b, blk in enumerate(blocks) for j in blk}
        for j, row in enumerate(self.matrix):
            for k, a in enumerate(row):
                if a and where[k] != where[j]:
                    return True
        return False

    def describe(self, coords: Sequence[str]) -> str:
        ring = Ring(tuple(coords), self.fld)
        parts = []
        for j, row in enumerate(self.matrix):
            form = ring.zero()
            for k, a in enumerate(row):
                if a:
                    form = form + ring.var(k) * a
            if not (len(form) == 1 and form == ring.var(j)):
                parts.append(f"{coords[j]} -> {form}")
        return ", ".join(parts) if parts else "id"


def identity(grading: Grading, fld: CyclotomicField) -> AutElement:
    n = len(grading.weights)
    M = tuple(tuple(fld.one if i == j else fld.zero for j in range(n)) for i in range(n))
    return AutElement(M, grading, fld)


def torus_matrix(lam: Sequence, grading: Grading, fld: CyclotomicField):
    """diag(chi_j(lambda)) for a torus element lambda."""
    diag = []
    for row in grading.weights:
        v = fld.one
        for l, e in zip(lam, row):
            if e:
                v = v * (l ** e if e > 0 else (1 / l) ** (-e))
        diag.append(v)
    n = len(diag)
    return tuple(tuple(diag[i] if i == j else fld.zero for j in range(n)) for i in range(n))


def canonicalize(raw, grading: Grading, fld: CyclotomicField, label: str = "") -> AutElement:
    """Torus-normalized form: the first nonzero entry of each pivot row becomes 1."""
    M = tuple(tuple(fld.coerce(a) for a in row) for row in raw)
    n = len(M)
    if n != len(grading.weights) or any(len(r) != n for r in M):
        raise GradingError(f"expected a {len(grading.weights)}x{len(grading.weights)} matrix")
    if not _det_nonzero(M, fld):
        raise GradingError("matrix is not invertible")
    _weight_map(M, grading)
    lam = []
    for p in grading.pivots():
        lead = next(a for a in M[p] if a)
        lam.append(1 / lead)
    D = torus_matrix(lam, grading, fld)
    out = tuple(tuple(D[j][j] * a for a in M[j]) for j in range(n))
    return AutElement(out, grading, fld, label)


def parse_generator(spec, ring: Ring, grading: Grading, label: str = "") -> AutElement:
    """A generator given as ``x1 -> -x1, ...``, a list of images, or an explicit matrix."""
    fld = ring.field
    if isinstance(spec, str):
        M = parse_linear_forms(spec, ring)
    elif spec and all(isinstance(s, str) for s in spec):
        if len(spec) != ring.nvars:
            raise GradingError(f"need {ring.nvars} images, got {len(spec)}")
        text = ", ".join(f"{c} -> {s}" for c, s in zip(ring.coords, spec))
        M = parse_linear_forms(text, ring)
    else:
        M = [[fld.coerce(ring.parse(str(a)).constant_value()) if isinstance(a, str) else fld.coerce(a)
              for a in row] for row in spec]
    return canonicalize(M, grading, fld, label)


# --------------------------------------------------------------------------
# groups


class FiniteGroup:
    """Elements of a closed group (identity first) with generator indices.

    The Cayley table is built on first access only; verdict code needs just
    generator commutators and element powers.
    """

    def __init__(self, elements: list[AutElement], generators: list[int], index: dict | None = None):
        self.elements = elements
        self.generators = generators
        self._index = index if index is not None else {g: i for i, g in enumerate(elements)}
        self._table: list[list[int]] | None = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g: AutElement) -> int:
        return self._index[g]

    def multiply(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        return self._index[self.elements[i] * self.elements[j]]

    @property
    def table(self) -> list[list[int]]:
        if self._table is None:
            self._table = [[self._index[a * b] for b in self.elements] for a in self.elements]
        return self._table

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.multiply(j, i)
            k += 1
        return k

    def power(self, i: int, k: int) -> int:
        return self._index[self.elements[i] ** k]


def close_group(generators: Sequence[AutElement], cap: int = DEFAULT_GROUP_CAP,
                grading: Grading | None = None, fld: CyclotomicField | None = None) -> FiniteGroup:
    """Breadth-first closure under right multiplication by the generators."""
    if generators:
        grading, fld = generators[0].grading, generators[0].fld
    elif grading is None or fld is None:
        raise ValueError("an empty generator list needs a grading and a field")
    e = identity(grading, fld)
    elements = [e]
    index = {e: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for g in generators:
            h = elements[i] * g
            if h not in index:
                if len(elements) >= cap:
                    raise GroupTooLarge(cap)
                index[h] = len(elements)
                elements.append(h)
                queue.append(index[h])
    return FiniteGroup(elements, [index[g] for g in generators], index)


@dataclass(frozen=True)
class AbelianType:
    invariant_factors: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def primary(self) -> tuple[int, ...]:
        return primary_factors(self.invariant_factors)

    def __str__(self):
        if not self.invariant_factors:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class NotAbelian:
    witness: tuple[int, int]

    def __bool__(self):
        return False


def _factor(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def primary_factors(factors: Sequence[int]) -> tuple[int, ...]:
    out = []
    for d in factors:
        for p, e in _factor(d).items():
            out.append(p ** e)
    return tuple(sorted(out))


def invariant_factors_from_primary(primary: Sequence[int]) -> tuple[int, ...]:
    """Assemble prime powers into d_1 | d_2 | ... | d_k."""
    by_prime: dict[int, list[int]] = {}
    for q in primary:
        if q == 1:
            continue
        f = _factor(q)
        if len(f) != 1:
            raise ValueError(f"{q} is not a prime power")
        p, e = next(iter(f.items()))
        by_prime.setdefault(p, []).append(e)
    k = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * k
    for p, exps in by_prime.items():
        exps = sorted(exps)
        for t, e in enumerate(exps):
            out[k - len(exps) + t] *= p ** e
    return tuple(out)


def abelian_type(G: FiniteGroup) -> AbelianType | NotAbelian:
    """Invariant factors from the p-power torsion counts r_k = log_p |{g : g^(p^k) = e}|."""
    for a in G.generators:
        for b in G.generators:
            if G.multiply(a, b) != G.multiply(b, a):
                return NotAbelian((a, b))
    n = G.order
    primary = []
    for p, top in _factor(n).items():
        counts = [0]
        k = 1
        while counts[-1] < top:
            q = p ** k
            c = sum(1 for g in G.elements if (g ** q).is_identity())
            r = 0
            while c > 1:
                c //= p
                r += 1
            counts.append(r)
            k += 1
        # counts[k] - counts[k-1] = number of cyclic factors of order >= p^k
        ge = [counts[k] - counts[k - 1] for k in range(1, len(counts))]
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            primary += [p ** (k + 1)] * (ge[k] - nxt)
    out = AbelianType(invariant_factors_from_primary(primary))
    assert out.order == n, "invariant factors do not multiply to the group order"
    return out
