"""Exact scalars: rationals and prime fields.

Rational scalars are plain ``fractions.Fraction`` values; prime-field
scalars are ``GFElement`` instances carrying their modulus.  A ``Field``
object fixes the coefficient domain for a whole computation; mixing
scalars from different fields is a bug and raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class FieldError(ValueError):
    pass


@dataclass(frozen=True)
class GFElement:
    """Element of F_p, always stored reduced to 0 <= value < p."""

    value: int
    p: int

    def _coerce(self, other):
        if isinstance(other, GFElement):
            if other.p != self.p:
                raise FieldError(f"mixed prime fields F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, int):
            return GFElement(other % self.p, self.p)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement((self.value + o.value) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement((self.value - o.value) % self.p, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement((o.value - self.value) % self.p, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GFElement((self.value * o.value) % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.value == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return GFElement((self.value * pow(o.value, self.p - 2, self.p)) % self.p, self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GFElement((-self.value) % self.p, self.p)

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RationalField:
    name: str = "Q"
    characteristic: int = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def scalar(self, n):
        return Fraction(n)

    def parse(self, s) -> Fraction:
        if isinstance(s, int):
            return Fraction(s)
        if not isinstance(s, str):
            raise FieldError(f"expected rational string, got {s!r}")
        parts = s.split("/")
        try:
            if len(parts) == 1:
                return Fraction(int(parts[0]))
            if len(parts) == 2:
                num, den = int(parts[0]), int(parts[1])
            else:
                raise ValueError
        except ValueError:
            raise FieldError(f"bad rational string {s!r}") from None
        if den == 0:
            raise FieldError(f"zero denominator in {s!r}")
        return Fraction(num, den)

    def fmt(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def name(self) -> str:
        return f"Fp:{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    def zero(self):
        return GFElement(0, self.p)

    def one(self):
        return GFElement(1, self.p)

    def scalar(self, n):
        if isinstance(n, GFElement):
            if n.p != self.p:
                raise FieldError("mixed prime fields")
            return n
        return GFElement(int(n) % self.p, self.p)

    def parse(self, s) -> GFElement:
        if isinstance(s, int):
            return self.scalar(s)
        if not isinstance(s, str):
            raise FieldError(f"expected prime-field string, got {s!r}")
        try:
            return self.scalar(int(s))
        except ValueError:
            raise FieldError(f"bad prime-field scalar {s!r}") from None

    def fmt(self, x) -> str:
        if isinstance(x, GFElement):
            return str(x.value)
        return str(int(x) % self.p)


Field = RationalField | PrimeField

QQ = RationalField()


def field_from_name(name: str) -> Field:
    """Resolve a field declaration string: "Q" or "Fp:<prime>"."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        try:
            p = int(name[3:])
        except ValueError:
            raise FieldError(f"bad field declaration {name!r}") from None
        return PrimeField(p)
    raise FieldError(f"unknown field {name!r}")
