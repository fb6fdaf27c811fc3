"""Scalar domains for exact linear algebra: the rationals and prime fields.

A field object carries the arithmetic; matrix entries themselves are plain
values (`fractions.Fraction` over Q, ints in ``[0, p)`` over F_p).  This keeps
the hot elimination loops free of per-scalar wrapper objects.
"""

from __future__ import annotations

from fractions import Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class RationalField:
    """The rationals, canonically: plain ints for integers, Fractions otherwise.

    Fractions keep lowest terms and a positive denominator by construction;
    storing denominator-1 values as ints keeps the (ubiquitous) all-integer
    matrix arithmetic on the fast int path.  Both types satisfy the Rational
    ABC, so mixed arithmetic and comparisons stay exact.
    """

    name = "Q"
    zero = 0
    one = 1

    def coerce(self, x):
        if isinstance(x, int):
            return x
        if not isinstance(x, Fraction):
            x = Fraction(x)
        return x.numerator if x.denominator == 1 else x

    def add(self, a, b):
        r = a + b
        return self.coerce(r) if isinstance(r, Fraction) else r

    def sub(self, a, b):
        r = a - b
        return self.coerce(r) if isinstance(r, Fraction) else r

    def mul(self, a, b):
        r = a * b
        return self.coerce(r) if isinstance(r, Fraction) else r

    def neg(self, a):
        return -a

    def inv(self, a):
        return self.coerce(Fraction(a.denominator, a.numerator))

    def format_value(self, a) -> str:
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def parse_value(self, s: str):
        return self.coerce(Fraction(s))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """F_p for a prime p.  Elements are ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    @property
    def name(self) -> str:
        return f"F{self.p}"

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            num = x.numerator % self.p
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return num * pow(den, self.p - 2, self.p) % self.p
        return int(x) % self.p

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

    def format_value(self, a) -> str:
        return str(a % self.p)

    def parse_value(self, s: str) -> int:
        return int(s) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_name(name: str):
    """Parse a field tag as used in the matrix text format (``Q`` or ``F<p>``)."""
    if name == "Q":
        return QQ
    if name.startswith("F"):
        return GF(int(name[1:]))
    raise ValueError(f"unknown field tag {name!r}")
