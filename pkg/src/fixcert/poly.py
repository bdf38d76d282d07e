"""Sparse multivariate polynomials over Q(zeta_N).

A :class:`MultiPoly` maps exponent tuples to nonzero field coefficients.  The
ring (coordinate names plus coefficient field) travels with every polynomial.
Monomial orders are encoded as integer-valued linear keys so that comparing
monomials, and shifting a whole polynomial by a monomial, is cheap.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cyclotomic import CyclotomicField, CyclotomicNumber, format_coeff, mpq

__all__ = [
    "Ring",
    "MultiPoly",
    "MonomialOrder",
    "Grading",
    "Inhomogeneous",
    "PolyParseError",
    "parse_poly",
    "parse_linear_forms",
    "multidegree",
    "pullback",
    "MAX_VARS",
]

MAX_VARS = 32

_KEY_BASE = 1 << 32


# --------------------------------------------------------------------------
# rings and orders


@dataclass(frozen=True)
class Ring:
    coords: tuple[str, ...]
    field: CyclotomicField = field(default_factory=CyclotomicField)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) > MAX_VARS:
            raise ValueError(f"at most {MAX_VARS} variables per ring, got {len(self.coords)}")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError(f"duplicate coordinate names in {self.coords}")

    @property
    def nvars(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def gens(self) -> list["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i) -> "MultiPoly":
        if isinstance(i, str):
            i = self.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    def const(self, c) -> "MultiPoly":
        c = self.field.coerce(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def extend(self, names: Sequence[str]) -> "Ring":
        return Ring(self.coords + tuple(names), self.field)

    def with_field(self, fld: CyclotomicField) -> "Ring":
        return Ring(self.coords, fld)

    def parse(self, text: str) -> "MultiPoly":
        return parse_poly(text, self)


class MonomialOrder:
    """Admissible monomial order given by a list of integer weight rows.

    Kinds: ``grevlex``, ``lex`` and ``block`` (a partition of the variable
    indices, each part ordered by its own inner order, earlier parts greater).
    """

    def __init__(self, kind: str = "grevlex", blocks: Sequence[Sequence[int]] | None = None,
                 inner: Sequence[str] | None = None):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.blocks = tuple(tuple(b) for b in blocks) if blocks else None
        self.inner = tuple(inner) if inner else None
        if kind == "block" and not self.blocks:
            raise ValueError("block order needs a partition")
        self._cache: dict[int, tuple[int, ...]] = {}

    @classmethod
    def grevlex(cls) -> "MonomialOrder":
        return cls("grevlex")

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def elimination(cls, drop: Sequence[int], nvars: int) -> "MonomialOrder":
        keep = [i for i in range(nvars) if i not in set(drop)]
        return cls("block", [list(drop), keep], ["grevlex", "grevlex"])

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.blocks == other.blocks and self.inner == other.inner)

    def __hash__(self):
        return hash((self.kind, self.blocks, self.inner))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder(block, {self.blocks}, {self.inner})"
        return f"MonomialOrder({self.kind})"

    @staticmethod
    def _rows(kind: str, idx: Sequence[int], n: int) -> list[list[int]]:
        rows = []
        if kind == "grevlex":
            r = [0] * n
            for i in idx:
                r[i] = 1
            rows.append(r)
            for i in reversed(idx[1:]):
                r = [0] * n
                r[i] = -1
                rows.append(r)
        else:
            for i in idx:
                r = [0] * n
                r[i] = 1
                rows.append(r)
        return rows

    def weights(self, nvars: int) -> tuple[int, ...]:
        """Per-variable integers c_i with key(m) = sum m_i c_i order-preserving."""
        if nvars in self._cache:
            return self._cache[nvars]
        if self.kind == "block":
            rows = []
            covered = sorted(i for b in self.blocks for i in b)
            if covered != list(range(nvars)):
                raise ValueError("block order partition does not match the variable count")
            inner = self.inner or ("grevlex",) * len(self.blocks)
            for b, k in zip(self.blocks, inner):
                rows += self._rows(k, list(b), nvars)
        else:
            rows = self._rows(self.kind, list(range(nvars)), nvars)
        m = len(rows)
        w = tuple(sum(rows[k][i] * _KEY_BASE ** (m - 1 - k) for k in range(m)) for i in range(nvars))
        self._cache[nvars] = w
        return w

    def key(self, mono: Sequence[int]) -> int:
        w = self.weights(len(mono))
        return sum(e * c for e, c in zip(mono, w) if e)


GREVLEX = MonomialOrder.grevlex()


@dataclass(frozen=True)
class Grading:
    """Integer weight matrix: one row per coordinate, one column per torus factor."""

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", w)
        if w and len({len(r) for r in w}) != 1:
            raise ValueError("ragged weight matrix")
        for j, row in enumerate(w):
            if not any(row):
                raise ValueError(f"coordinate {j} has zero weight vector")

    @property
    def rank(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def degree_of(self, mono: Sequence[int]) -> tuple[int, ...]:
        r = self.rank
        out = [0] * r
        for e, row in zip(mono, self.weights):
            if e:
                for i in range(r):
                    out[i] += e * row[i]
        return tuple(out)

    def pivots(self) -> list[int | None]:
        """First coordinate whose weight vector is the i-th unit vector, per torus factor."""
        piv = []
        for i in range(self.rank):
            unit = tuple(1 if k == i else 0 for k in range(self.rank))
            piv.append(next((j for j, row in enumerate(self.weights) if row == unit), None))
        return piv


@dataclass(frozen=True)
class Inhomogeneous:
    """Verdict: two terms of a polynomial carry different multidegrees."""

    first: tuple[int, ...]
    second: tuple[int, ...]
    degrees: tuple[tuple[int, ...], tuple[int, ...]]

    def __bool__(self):
        return False


# --------------------------------------------------------------------------
# polynomials


class MultiPoly:
    """Immutable sparse polynomial ``{exponent tuple: coefficient}``."""

    __slots__ = ("ring", "terms_dict", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], object] | None = None):
        self.ring = ring
        self.terms_dict = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # -- basic protocol ---------------------------------------------------
    def __bool__(self):
        return bool(self.terms_dict)

    def __len__(self):
        return len(self.terms_dict)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring.coords == other.ring.coords and self.terms_dict == other.terms_dict
        if isinstance(other, (int, type(mpq(0)), CyclotomicNumber)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms_dict.items()))
        return self._hash

    def terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[object, tuple[int, ...]]]:
        """(coefficient, monomial) pairs, monomials strictly decreasing."""
        w = order.weights(self.ring.nvars)
        items = sorted(self.terms_dict.items(), key=lambda mc: sum(e * c for e, c in zip(mc[0], w)), reverse=True)
        return [(c, m) for m, c in items]

    def leading_term(self, order: MonomialOrder = GREVLEX):
        return self.terms(order)[0]

    def monomials(self):
        return list(self.terms_dict)

    def coefficients(self):
        return list(self.terms_dict.values())

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms_dict)

    def constant_value(self):
        return self.terms_dict.get((0,) * self.ring.nvars, self.ring.field.zero)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms_dict), default=-1)

    def variables(self) -> set[int]:
        out = set()
        for m in self.terms_dict:
            out.update(i for i, e in enumerate(m) if e)
        return out

    # -- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring.coords != self.ring.coords:
                raise ValueError("polynomials live in different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms_dict)
        for m, c in other.terms_dict.items():
            v = out.get(m)
            out[m] = c if v is None else v + c
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms_dict.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.ring.field.coerce(other)
            return MultiPoly(self.ring, {m: v * c for m, v in self.terms_dict.items()})
        other = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms_dict.items():
            for m2, c2 in other.terms_dict.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if not other.is_constant() or not other:
                raise ZeroDivisionError("only division by nonzero constants is supported")
            other = other.constant_value()
        inv = 1 / self.ring.field.coerce(other)
        return self * inv

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self:
            return self
        c, _ = self.leading_term(order)
        return self * (1 / c)

    def map_coefficients(self, fn, ring: Ring | None = None) -> "MultiPoly":
        return MultiPoly(ring or self.ring, {m: fn(c) for m, c in self.terms_dict.items()})

    def change_ring(self, ring: Ring) -> "MultiPoly":
        """Re-express in a ring whose coordinates include all variables used here."""
        pos = []
        for i, name in enumerate(self.ring.coords):
            pos.append(ring.coords.index(name) if name in ring.coords else None)
        n = ring.nvars
        out = {}
        for m, c in self.terms_dict.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.ring.coords[i]} not in target ring")
                    e[pos[i]] = k
            out[tuple(e)] = ring.field.coerce(c)
        return MultiPoly(ring, out)

    # -- calculus and evaluation -----------------------------------------
    def diff(self, var) -> "MultiPoly":
        i = self.ring.index(var) if isinstance(var, str) else var
        out = {}
        for m, c in self.terms_dict.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return MultiPoly(self.ring, out)

    def evaluate(self, point: Sequence):
        fld = self.ring.field
        pt = [fld.coerce(x) for x in point]
        total = fld.zero
        for m, c in self.terms_dict.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def substitute(self, values: Mapping) -> "MultiPoly":
        """Replace some variables (index or name) by constants or polynomials of the same ring."""
        subs = {}
        for k, v in values.items():
            i = self.ring.index(k) if isinstance(k, str) else k
            subs[i] = v if isinstance(v, MultiPoly) else self.ring.const(v)
        result = self.ring.zero()
        cache: dict = {}
        for m, c in self.terms_dict.items():
            e = list(m)
            term = None
            for i, p in subs.items():
                if e[i]:
                    key = (i, e[i])
                    if key not in cache:
                        cache[key] = p ** e[i]
                    term = cache[key] if term is None else term * cache[key]
                    e[i] = 0
            mono = MultiPoly(self.ring, {tuple(e): c})
            result = result + (mono if term is None else mono * term)
        return result

    def compose(self, images: Sequence["MultiPoly"], ring: Ring | None = None) -> "MultiPoly":
        """p(images[0], ..., images[n-1]) with all images in a common ring."""
        if len(images) != self.ring.nvars:
            raise ValueError(f"need {self.ring.nvars} images, got {len(images)}")
        target = ring or (images[0].ring if images else self.ring)
        result = MultiPoly(target, {})
        powers: dict = {}
        for m, c in self.terms_dict.items():
            term = MultiPoly(target, {(0,) * target.nvars: target.field.coerce(c)})
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = images[i] ** e
                    term = term * powers[key]
            result = result + term
        return result

    # -- text -------------------------------------------------------------
    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r})"

    def to_string(self, order: MonomialOrder = GREVLEX) -> str:
        if not self:
            return "0"
        names = self.ring.coords
        pieces = []
        for c, m in self.terms(order):
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)
            neg = False
            if not isinstance(c, CyclotomicNumber) or c.is_rational():
                q = c if not isinstance(c, CyclotomicNumber) else c.coeffs[0]
                if q < 0:
                    neg, q = True, -q
                coef = format_coeff(q)
            else:
                coef = format_coeff(c)
                if coef.startswith("-"):
                    neg, coef = True, coef[1:]
            if mono and coef == "1":
                text = mono
            elif mono:
                text = f"{coef}*{mono}"
            else:
                text = coef
            pieces.append(("-" if neg else "+", text))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out


def multidegree(p: MultiPoly, W: Grading):
    """Common W-degree of every term, or :class:`Inhomogeneous` naming two offenders."""
    if not p:
        return (0,) * W.rank
    seen = None
    for m in p.terms_dict:
        d = W.degree_of(m)
        if seen is None:
            seen = (m, d)
        elif d != seen[1]:
            return Inhomogeneous(seen[0], m, (seen[1], d))
    return seen[1]


def pullback(p: MultiPoly, matrix: Sequence[Sequence]) -> MultiPoly:
    """p composed with the linear map x_j -> sum_k matrix[j][k] x_k."""
    n = p.ring.nvars
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError(f"pullback needs a {n}x{n} matrix")
    fld = p.ring.field
    images = []
    for row in matrix:
        terms = {}
        for k, a in enumerate(row):
            if a:
                e = [0] * n
                e[k] = 1
                terms[tuple(e)] = fld.coerce(a)
        images.append(MultiPoly(p.ring, terms))
    return p.compose(images, p.ring)


# --------------------------------------------------------------------------
# parser


class PolyParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}\n{' ' * (pos + 1)}^")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|/|\(|\)|,))")

ROOT_SYMBOLS = {"i": 4, "omega": 3}


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolyParseError("unexpected character", text, pos)
            start = m.start(m.lastindex)
            kind = ("int", "name", "op")[m.lastindex - 1]
            self.tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            raise PolyParseError(f"expected {value!r}", self.text, tok[2])
        if tok[0] == "end":
            raise PolyParseError("unexpected end of input", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        if not self.tokens:
            raise PolyParseError("empty polynomial", self.text, 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolyParseError(f"unexpected token {tok[1]!r}", self.text, tok[2])
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, _, pos = self.take()[1], None, self.peek()[2]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    raise PolyParseError("division only by nonzero constants", self.text, pos)
                p = p / q
        return p

    def unary(self) -> MultiPoly:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                raise PolyParseError("exponent must be a non-negative integer", self.text, tok[2])
            self.take()
            base = base ** int(tok[1])
        return base

    def atom(self) -> MultiPoly:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return self.ring.const(int(value))
        if value == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if kind == "name":
            self.take()
            if value in self.ring.coords:
                return self.ring.var(value)
            if value == "zeta":
                self.take("(")
                tok = self.peek()
                if tok[0] != "int":
                    raise PolyParseError("zeta needs an integer order", self.text, tok[2])
                self.take()
                self.take(")")
                return self._root(int(tok[1]), pos)
            if value in ROOT_SYMBOLS:
                return self._root(ROOT_SYMBOLS[value], pos)
            raise PolyParseError(f"unknown identifier {value!r}", self.text, pos)
        if kind == "end":
            raise PolyParseError("unexpected end of input", self.text, pos)
        raise PolyParseError(f"unexpected token {value!r}", self.text, pos)

    def _root(self, n: int, pos: int) -> MultiPoly:
        try:
            return self.ring.const(self.ring.field.zeta(n))
        except ValueError as exc:
            raise PolyParseError(str(exc), self.text, pos) from None


def parse_poly(text: str, ring: Ring) -> MultiPoly:
    """Parse ``text`` in the grammar ``+ - * / ^ ( )``, integers, ``zeta(N)``, ``i``, ``omega``."""
    return _Parser(str(text), ring).parse()


def parse_linear_forms(text: str, ring: Ring) -> list[list]:
    """Matrix rows from ``x1 -> -x1, x2 -> x3`` (unlisted coordinates are fixed)."""
    n = ring.nvars
    rows = [[ring.field.one if j == k else ring.field.zero for k in range(n)] for j in range(n)]
    seen = set()
    for piece in _split_top_level(text):
        if "->" not in piece:
            raise PolyParseError("expected 'coord -> linear form'", text, text.find(piece))
        lhs, rhs = piece.split("->", 1)
        lhs = lhs.strip()
        if lhs not in ring.coords:
            raise PolyParseError(f"unknown coordinate {lhs!r}", text, text.find(piece))
        if lhs in seen:
            raise PolyParseError(f"coordinate {lhs!r} assigned twice", text, text.find(piece))
        seen.add(lhs)
        form = parse_poly(rhs, ring)
        rows[ring.index(lhs)] = linear_coefficients(form, text)
    return rows


def linear_coefficients(form: MultiPoly, text: str = "") -> list:
    n = form.ring.nvars
    row = [form.ring.field.zero] * n
    for m, c in form.terms_dict.items():
        if sum(m) != 1:
            raise PolyParseError("image is not a linear form", text or str(form), 0)
        row[m.index(1)] = c
    return row


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p for p in parts if p.strip()]
