"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_N).

Rationals are ``gmpy2.mpq``.  A field element of Q(zeta_N) with N > 2 is a
:class:`CyclotomicNumber` holding its coordinates in the power basis
1, zeta, ..., zeta^(phi(N)-1), reduced modulo the N-th cyclotomic polynomial.
For N in {1, 2} the field is Q itself and elements are plain rationals.
"""
from __future__ import annotations

from functools import lru_cache
from gmpy2 import mpq

__all__ = [
    "mpq",
    "Rational",
    "CyclotomicNumber",
    "CyclotomicField",
    "cyclotomic_polynomial",
    "euler_phi",
    "is_rational",
    "to_rational",
    "OrderMismatch",
]

Rational = mpq

_ZERO = mpq(0)
_ONE = mpq(1)


class OrderMismatch(ValueError):
    """Two cyclotomic numbers from different fields were combined."""


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # integer polynomials, coefficient lists lowest degree first, den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n (lowest degree first), by dividing x^n - 1 by Phi_d, d | n, d < n."""
    if n < 1:
        raise ValueError("order must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[mpq, ...], ...]:
    """Row k gives zeta^(phi + k) in the power basis, for 0 <= k < phi - 1."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    rows = []
    # zeta^deg = -(c_0 + c_1 zeta + ... + c_{deg-1} zeta^{deg-1})
    cur = [mpq(-c) for c in phi_poly[:deg]]
    for _ in range(max(deg - 1, 0)):
        rows.append(tuple(cur))
        top = cur[-1]
        nxt = [_ZERO] + cur[:-1]
        if top:
            for j in range(deg):
                nxt[j] -= top * phi_poly[j]
        cur = nxt
    return tuple(rows)


class CyclotomicNumber:
    """Immutable element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs):
        self.order = order
        self.coeffs = tuple(coeffs)
        self._hash = None

    # -- construction -----------------------------------------------------
    @classmethod
    def from_rational(cls, order: int, value) -> "CyclotomicNumber":
        deg = euler_phi(order)
        return cls(order, (mpq(value),) + (_ZERO,) * (deg - 1))

    @classmethod
    def zeta_power(cls, order: int, k: int) -> "CyclotomicNumber":
        deg = euler_phi(order)
        k %= order
        if k < deg:
            c = [_ZERO] * deg
            c[k] = _ONE
            return cls(order, c)
        base = cls.zeta_power(order, 1)
        return base ** k

    # -- predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_part(self) -> mpq:
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicNumber):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, type(_ZERO))):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash((self.order, self.coeffs))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise OrderMismatch(f"Q(zeta_{self.order}) vs Q(zeta_{other.order})")
            return other
        return CyclotomicNumber.from_rational(self.order, other)

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.order, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CyclotomicNumber(self.order, [-a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            other = mpq(other)
            return CyclotomicNumber(self.order, [a * other for a in self.coeffs])
        if other.order != self.order:
            raise OrderMismatch(f"Q(zeta_{self.order}) vs Q(zeta_{other.order})")
        a, b = self.coeffs, other.coeffs
        deg = len(a)
        prod = [_ZERO] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:deg]
        table = _reduction_table(self.order)
        for k, c in enumerate(prod[deg:]):
            if c:
                row = table[k]
                for j in range(deg):
                    out[j] += c * row[j]
        return CyclotomicNumber(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.from_rational(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse; solves the multiplication-by-self linear system."""
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.from_rational(self.order, 1 / self.coeffs[0])
        deg = len(self.coeffs)
        # column j = self * zeta^j
        cols = [(self * CyclotomicNumber.zeta_power(self.order, j)).coeffs for j in range(deg)]
        rows = [[cols[j][i] for j in range(deg)] + [_ONE if i == 0 else _ZERO] for i in range(deg)]
        sol = _solve(rows, deg)
        return CyclotomicNumber(self.order, sol)

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * self._coerce(other).inverse()
        other = mpq(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return CyclotomicNumber(self.order, [a / other for a in self.coeffs])

    def __rtruediv__(self, other):
        return self.inverse() * mpq(other)

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugation zeta -> zeta^(-1)."""
        result = CyclotomicNumber.from_rational(self.order, 0)
        for k, c in enumerate(self.coeffs):
            if c:
                result = result + CyclotomicNumber.zeta_power(self.order, -k) * c
        return result

    def embed(self, n: int) -> "CyclotomicNumber":
        """Image in Q(zeta_n) under zeta_m -> zeta_n^(n/m); requires m | n."""
        if n % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{n})")
        step = n // self.order
        result = CyclotomicNumber.from_rational(n, 0)
        for k, c in enumerate(self.coeffs):
            if c:
                result = result + CyclotomicNumber.zeta_power(n, k * step) * c
        return result

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.order}, {format_coeff(self)})"

    def __str__(self) -> str:
        return format_coeff(self)


def _solve(rows: list[list], n: int) -> list:
    # Gauss-Jordan on an augmented n x (n+1) matrix, exact
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def is_rational(c) -> bool:
    return c.is_rational() if isinstance(c, CyclotomicNumber) else True


def to_rational(c) -> mpq:
    if isinstance(c, CyclotomicNumber):
        if not c.is_rational():
            raise ValueError(f"{c} is not rational")
        return c.coeffs[0]
    return mpq(c)


def _fmt_rat(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_coeff(c) -> str:
    """Text form in the polynomial grammar (``zeta(N)^k`` for roots)."""
    if not isinstance(c, CyclotomicNumber):
        return _fmt_rat(mpq(c))
    parts = []
    for k, a in enumerate(c.coeffs):
        if not a:
            continue
        if k == 0:
            parts.append(_fmt_rat(a))
            continue
        root = f"zeta({c.order})" + (f"^{k}" if k > 1 else "")
        if a == 1:
            parts.append(root)
        elif a == -1:
            parts.append("-" + root)
        else:
            parts.append(f"{_fmt_rat(a)}*{root}")
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += p if p.startswith("-") else "+" + p
    return text if len(parts) == 1 else f"({text})"


class CyclotomicField:
    """The coefficient field Q(zeta_N) shared by every number in one job."""

    def __init__(self, order: int = 1):
        if order < 1:
            raise ValueError("field order must be positive")
        self.order = order
        self.degree = euler_phi(order)
        self.rational = order <= 2

    def __repr__(self) -> str:
        return f"CyclotomicField({self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclotomicField) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("CyclotomicField", self.order))

    def __call__(self, value):
        return self.coerce(value)

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, value):
        """Bring an int, rational or cyclotomic number into this field's element type."""
        if isinstance(value, CyclotomicNumber):
            if value.order != self.order:
                if self.order % value.order == 0:
                    value = value.embed(self.order)
                elif value.is_rational():
                    value = value.coeffs[0]
                else:
                    raise OrderMismatch(f"Q(zeta_{value.order}) does not embed into Q(zeta_{self.order})")
            if self.rational:
                return to_rational(value)
            return value
        value = mpq(value)
        if self.rational:
            return value
        return CyclotomicNumber.from_rational(self.order, value)

    def zeta(self, n: int, k: int = 1):
        """zeta_n^k inside this field; zeta_n must live in Q(zeta_N)."""
        if n == 1:
            return self.one
        if n == 2:
            return self.coerce(-1 if k % 2 else 1)
        if self.rational:
            raise OrderMismatch(f"zeta({n}) is not in Q; use a larger field order")
        if self.order % n == 0:
            return CyclotomicNumber.zeta_power(self.order, (self.order // n) * k)
        m = n // 2
        if n % 2 == 0 and m % 2 == 1 and self.order % m == 0:
            # -zeta_m^((m+1)/2) is a primitive 2m-th root of unity
            root = -CyclotomicNumber.zeta_power(self.order, (self.order // m) * ((m + 1) // 2))
            return root ** k
        raise OrderMismatch(f"zeta({n}) is not in Q(zeta_{self.order}); use a larger field order")

    def is_zero(self, c) -> bool:
        return not c

    def conjugate(self, c):
        return c.conjugate() if isinstance(c, CyclotomicNumber) else c

    def roots_of_unity(self) -> list:
        """All roots of unity in this field (the 2N-th ones when N is odd)."""
        if self.rational:
            return [mpq(1), mpq(-1)]
        n = self.order
        roots = [CyclotomicNumber.zeta_power(n, k) for k in range(n)]
        if n % 2:
            roots += [-r for r in roots]
        return roots
