"""Exact arithmetic in real quadratic fields and in the rings Z[theta].

``QuadSurd`` is ``p + q*sqrt(d)`` with rational ``p, q`` and a squarefree
``d > 1``; comparisons are exact.  ``QuadInt`` is ``a + c*theta`` with integer
``a, c`` where ``theta`` is the root of ``x^2 + b x + 1`` of absolute value
greater than one; it is a unit, so negative powers stay in the ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import isqrt

Number = int | Fraction


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n = k^2 d`` and ``d`` squarefree."""
    k, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        while m % (p * p) == 0:
            m //= p * p
            k *= p
        if m % p == 0:
            m //= p
            d *= p
        p += 1
    return k, d * m


def _sign_of(p: Fraction, q: Fraction, d: int) -> int:
    """Exact sign of ``p + q sqrt(d)``."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with q^2 d
    lhs, rhs = p * p, q * q * d
    if lhs == rhs:
        return 0
    return sp if lhs > rhs else sq


@total_ordering
@dataclass(frozen=True)
class QuadSurd:
    p: Fraction
    q: Fraction
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))

    @classmethod
    def rational(cls, x: Number, d: int) -> QuadSurd:
        return cls(Fraction(x), Fraction(0), d)

    @classmethod
    def sqrt_of(cls, n: Number) -> QuadSurd:
        """``sqrt(n)`` for a positive rational ``n`` that need not be a perfect square."""
        n = Fraction(n)
        if n < 0:
            raise ValueError("negative radicand")
        # sqrt(a/b) = sqrt(a b) / b
        k, d = _squarefree_split(n.numerator * n.denominator)
        return cls(Fraction(0), Fraction(k, n.denominator), d) if d > 1 else cls(Fraction(k, n.denominator), Fraction(0), 1)

    def _coerce(self, other) -> QuadSurd:
        if isinstance(other, QuadSurd):
            if other.d != self.d and other.q != 0 and self.q != 0:
                raise ValueError(f"mixed fields Q(sqrt {self.d}) and Q(sqrt {other.d})")
            if other.q == 0:
                return QuadSurd(other.p, 0, self.d)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadSurd(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def _field(self, other: QuadSurd) -> int:
        return self.d if self.q != 0 or other.q == 0 else other.d

    @property
    def is_rational(self) -> bool:
        return self.q == 0 or self.d == 1

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.p + o.p, self.q + o.q, self._field(o))

    __radd__ = __add__

    def __neg__(self) -> QuadSurd:
        return QuadSurd(-self.p, -self.q, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadSurd(self.p * o.p + self.q * o.q * d, self.p * o.q + self.q * o.p, d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadSurd:
        return QuadSurd(self.p, -self.q, self.d)

    def norm(self) -> Fraction:
        return self.p * self.p - self.q * self.q * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadSurd(num.p / n, num.q / n, num.d)

    def __rtruediv__(self, other):
        return QuadSurd.rational(other, self.d) / self

    def sign(self) -> int:
        return _sign_of(self.p, self.q, self.d)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.q == 0 and self.p == other
        if not isinstance(other, QuadSurd):
            return NotImplemented
        if self.q == 0 and other.q == 0:
            return self.p == other.p
        return self.p == other.p and self.q == other.q and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.p, self.q if self.q else 0, self.d if self.q else 0))

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * self.d ** 0.5

    def __repr__(self) -> str:
        return f"QuadSurd({self.p}, {self.q}, {self.d})"

    def __str__(self) -> str:
        if self.q == 0:
            return str(self.p)
        q = "" if abs(self.q) == 1 else f"{abs(self.q)}*"
        sign = "+" if self.q > 0 else "-"
        head = f"{self.p} {sign} " if self.p else ("" if self.q > 0 else "-")
        return f"{head}{q}sqrt({self.d})"

    def to_json(self) -> dict:
        return {"rational": str(self.p), "sqrt_coeff": str(self.q), "radicand": self.d}


@total_ordering
@dataclass(frozen=True)
class QuadInt:
    """Element ``a + c*theta`` of ``Z[theta]``, ``theta^2 = -b*theta - 1``."""

    a: int
    c: int
    b: int

    @classmethod
    def of(cls, a: int, b: int) -> QuadInt:
        return cls(a, 0, b)

    @classmethod
    def theta(cls, b: int) -> QuadInt:
        return cls(0, 1, b)

    def _coerce(self, other) -> QuadInt:
        if isinstance(other, QuadInt):
            if other.b != self.b:
                raise ValueError("mixed rings")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.b)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.c + o.c, self.b)

    __radd__ = __add__

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.c, self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        cc = self.c * o.c
        return QuadInt(self.a * o.a - cc, self.a * o.c + self.c * o.a - self.b * cc, self.b)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QuadInt:
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadInt(1, 0, self.b)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self) -> int:
        # a^2 - b a c + c^2 for theta with theta + theta' = -b, theta theta' = 1
        return self.a * self.a - self.b * self.a * self.c + self.c * self.c

    def conjugate(self) -> QuadInt:
        # theta' = -b - theta
        return QuadInt(self.a - self.b * self.c, -self.c, self.b)

    def inverse(self) -> QuadInt:
        n = self.norm()
        if n not in (1, -1):
            raise ZeroDivisionError(f"{self} is not a unit")
        cj = self.conjugate()
        return QuadInt(cj.a * n, cj.c * n, self.b)

    def to_surd(self) -> QuadSurd:
        disc = self.b * self.b - 4
        k, d = _squarefree_split(disc)
        # theta = (-b + s sqrt(disc)) / 2 with |theta| > 1
        s = 1 if self.b < 0 else -1
        return QuadSurd(Fraction(2 * self.a - self.c * self.b, 2), Fraction(s * self.c * k, 2), d)

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).to_surd().sign() < 0

    def __float__(self) -> float:
        return float(self.to_surd())

    def __str__(self) -> str:
        if self.c == 0:
            return str(self.a)
        return f"{self.a}{self.c:+d}t"

    def to_json(self) -> list[int]:
        return [self.a, self.c]


def golden_ring() -> int:
    """Parameter ``b`` for which ``theta = phi^2 = (3 + sqrt 5)/2``."""
    return -3


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n
