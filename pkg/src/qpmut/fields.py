"""Exact scalar fields: arbitrary-precision rationals and prime fields GF(p).

Scalars are plain Python values (``fractions.Fraction`` for the rationals,
``int`` in ``range(p)`` for GF(p)); all arithmetic goes through a field
object so that callers never touch floating point.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ArithmeticError):
    """Raised on invalid field arithmetic (division by zero, bad scalar)."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field of rational numbers, scalars are ``Fraction`` values."""

    name = "Q"
    characteristic = 0

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise FieldError(f"cannot coerce {x!r} into Q")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise FieldError("division by zero in Q")
        return Fraction(a) / b

    def is_zero(self, a):
        return a == 0

    def parse(self, s: str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {s!r}") from exc

    def fmt(self, a) -> str:
        return str(Fraction(a))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField:
    """GF(p) for a prime p, scalars are ints reduced mod p."""

    characteristic: int

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"GF({p}): modulus is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"gf({p})"

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        raise FieldError(f"cannot coerce {x!r} into GF({self.p})")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return self.div(int(num) % self.p, int(den) % self.p)
        try:
            return int(s) % self.p
        except ValueError as exc:
            raise FieldError(f"bad GF({self.p}) literal {s!r}") from exc

    def fmt(self, a) -> str:
        return str(a % self.p)

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return self.name


QQ = Rationals()


def field_from_name(name: str):
    """Parse a field descriptor, e.g. ``"Q"`` or ``"gf(7)"``."""
    s = name.strip().lower()
    if s in ("q", "qq", "rational", "rationals"):
        return QQ
    if s.startswith("gf(") and s.endswith(")"):
        return PrimeField(int(s[3:-1]))
    raise FieldError(f"unknown field descriptor {name!r}")
