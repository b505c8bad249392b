"""Exact scalar arithmetic: rationals and prime fields F_p.

Every computation in the workbench happens over one of these two fields.
Rationals are represented by ``fractions.Fraction`` (always in lowest terms
with positive denominator), prime-field elements by plain ints in [0, p).
Field objects carry the operations; values stay unwrapped for speed.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    """Raised on malformed scalars or mixed-field arithmetic."""


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


class RationalField:
    """The field Q. Elements are Fractions."""

    tag = "rationals"

    zero = Fraction(0)
    one = Fraction(1)

    def check(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, int):
            return Fraction(a)
        raise FieldError(f"not a rational scalar: {a!r}")

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

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
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / self._nonzero(b)

    @staticmethod
    def _nonzero(b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return b

    def parse(self, s: str) -> Fraction:
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise FieldError(f"bad rational scalar {s!r}: {e}") from None

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p <= 2^31. Elements are ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise FieldError(f"modulus {p!r} is not prime")
        if p > 2**31:
            raise FieldError(f"modulus {p} exceeds 2^31")
        self.p = p
        self.tag = f"fp:{p}"
        self.zero = 0
        self.one = 1 % p

    def check(self, a):
        if isinstance(a, int) and not isinstance(a, bool):
            return a % self.p
        raise FieldError(f"not an F_{self.p} scalar: {a!r}")

    def from_int(self, n: int) -> int:
        return n % self.p

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
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def parse(self, s: str) -> int:
        try:
            return int(s.strip()) % self.p
        except ValueError:
            raise FieldError(f"bad F_{self.p} scalar {s!r}") from None

    def format(self, a) -> str:
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_tag(tag: str):
    """Inverse of ``field.tag``; accepts "rationals" and "fp:<p>"."""
    if tag == "rationals":
        return QQ
    if tag.startswith("fp:"):
        try:
            p = int(tag[3:])
        except ValueError:
            raise FieldError(f"bad field tag {tag!r}") from None
        return PrimeField(p)
    raise FieldError(f"unknown field tag {tag!r}")


def same_field(a, b):
    if a != b:
        raise FieldError(f"field mismatch: {a.tag} vs {b.tag}")
    return a
