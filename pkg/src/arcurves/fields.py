"""Exact coefficient fields: the rationals and odd prime fields.

Every computation in this package is exact.  Field elements are plain
Python objects (``Fraction`` for the rationals, ``int`` in ``[0, ell)``
for a prime field) and a small field object supplies the arithmetic, so
the linear algebra layer can stay generic without wrapper classes.
"""

from __future__ import annotations

from fractions import Fraction


class RationalField:
    """The field of rational numbers, elements represented as Fraction."""

    char = 0

    def __call__(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

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
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")


class PrimeField:
    """The field with ell elements, ell an odd prime; elements are ints in [0, ell)."""

    def __init__(self, ell: int):
        if ell < 3 or not _is_prime(ell):
            raise ValueError(f"{ell} is not an odd prime")
        self.ell = ell
        self.char = ell

    def __call__(self, value):
        if isinstance(value, int):
            return value % self.ell
        if isinstance(value, Fraction):
            return self(value.numerator) * self.inv(self(value.denominator)) % self.ell
        if isinstance(value, str):
            if "/" in value:
                num, den = value.split("/")
                return self.div(self(int(num)), self(int(den)))
            return int(value) % self.ell
        raise TypeError(f"cannot coerce {value!r} into F_{self.ell}")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.ell

    def sub(self, a, b):
        return (a - b) % self.ell

    def mul(self, a, b):
        return (a * b) % self.ell

    def neg(self, a):
        return (-a) % self.ell

    def inv(self, a):
        if a % self.ell == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.ell)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.ell == 0

    def eq(self, a, b):
        return (a - b) % self.ell == 0

    def to_str(self, a):
        return str(a % self.ell)

    def __repr__(self):
        return f"F{self.ell}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.ell == self.ell

    def __hash__(self):
        return hash(("PrimeField", self.ell))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


QQ = RationalField()


def field_from_string(name: str):
    """Parse a field name: "Q" for the rationals, "F<ell>" for a prime field."""
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown field {name!r}; expected Q or F<prime>")
