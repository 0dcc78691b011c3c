"""Exact coefficient fields: the rationals, prime fields and quadratic extensions of Q.

Field elements are plain Python values so they can flow through generic
kernels: ``Fraction`` for Q, ``int`` in ``[0, p)`` for GF(p) and
``QuadElement`` for Q(sqrt(D)).  The field object does the normalising.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt


class FieldMismatchError(ValueError):
    """Raised when values from two different fields are combined."""


class Field:
    """Common interface; subclasses fix the element representation."""

    tag: str = ""
    characteristic: int = 0

    def __call__(self, value):
        return self.convert(value)

    def __eq__(self, other):
        return isinstance(other, Field) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return self.tag

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return self.normalize(a ** e)

    def is_zero(self, a) -> bool:
        return not a

    def normalize(self, value):
        return self.convert(value)

    def contains(self, other: "Field") -> bool:
        """True when every element of ``other`` is an element of ``self``."""
        return self == other

    def descend(self, value, target: "Field"):
        """Express ``value`` as an element of the subfield ``target``."""
        if target == self:
            return value
        raise FieldMismatchError(f"cannot move {self} values into {target}")

    def format(self, value) -> str:
        return str(value)

    def convert(self, value):  # pragma: no cover - abstract
        raise NotImplementedError

    def inv(self, a):  # pragma: no cover - abstract
        raise NotImplementedError


class RationalField(Field):
    tag = "Q"
    characteristic = 0

    def convert(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, QuadElement):
            if value.b:
                raise FieldMismatchError(f"{value} is not rational")
            return value.a
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)

    def normalize(self, value):
        return value if isinstance(value, Fraction) else self.convert(value)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / Fraction(a)

    def sqrt(self, a):
        """Exact rational square root, or ``None`` when ``a`` is not a square."""
        a = Fraction(a)
        if a < 0:
            return None
        n, d = isqrt(a.numerator), isqrt(a.denominator)
        if n * n == a.numerator and d * d == a.denominator:
            return Fraction(n, d)
        return None

    def format(self, value) -> str:
        return str(value)


QQ = RationalField()


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.tag = str(p)

    def convert(self, value):
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, str):
            return self.convert(Fraction(value.strip()))
        if isinstance(value, QuadElement):
            raise FieldMismatchError("quadratic-extension values have no image in GF(p)")
        return int(value) % self.p

    def normalize(self, value):
        return value % self.p if type(value) is int else self.convert(value)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def pow(self, a, e):
        return pow(a, e, self.p)

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def is_square(self, a) -> bool:
        a %= self.p
        if a == 0 or self.p == 2:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        """A square root of ``a`` mod p, or ``None`` if ``a`` is a non-residue."""
        from sympy.ntheory import sqrt_mod

        a %= self.p
        if not self.is_square(a):
            return None
        return sqrt_mod(a, self.p)

    def elements(self):
        return range(self.p)


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def is_prime(n: int) -> bool:
    from sympy import isprime

    return isprime(n)


class QuadElement:
    """``a + b*sqrt(D)`` with rational ``a`` and ``b``; immutable."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D: int):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElement is immutable")

    def _lift(self, other):
        if isinstance(other, QuadElement):
            if other.D != self.D:
                raise FieldMismatchError(f"sqrt({self.D}) vs sqrt({other.D})")
            return other
        return QuadElement(other, 0, self.D)

    def __add__(self, other):
        o = self._lift(other)
        return QuadElement(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadElement(
            self.a * o.a + self.D * self.b * o.b, self.a * o.b + self.b * o.a, self.D
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = QuadElement(1, 0, self.D)
        for _ in range(e):
            result = result * self
        return result

    def inverse(self):
        norm = self.a * self.a - self.D * self.b * self.b
        if not norm:
            raise ZeroDivisionError("division by zero in quadratic field")
        return QuadElement(self.a / norm, -self.b / norm, self.D)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadElement):
            return (self.a, self.b, self.D) == (other.a, other.b, other.D)
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b, self.D))

    def __repr__(self):
        return f"QuadElement({self.a}, {self.b}, {self.D})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.D})"


class QuadraticField(Field):
    """Q(sqrt(D)) for an integer D that is not a perfect square."""

    def __init__(self, D: int):
        if D >= 0 and isqrt(D) ** 2 == D:
            raise ValueError(f"{D} is a perfect square")
        self.D = D
        self.characteristic = 0
        self.tag = f"Q(sqrt({D}))"

    def convert(self, value):
        if isinstance(value, QuadElement):
            if value.D != self.D:
                raise FieldMismatchError(f"{value} not in {self}")
            return value
        if isinstance(value, (list, tuple)):
            return QuadElement(Fraction(value[0]), Fraction(value[1]), self.D)
        if isinstance(value, str):
            return QuadElement(Fraction(value.strip()), 0, self.D)
        return QuadElement(value, 0, self.D)

    def normalize(self, value):
        return value if isinstance(value, QuadElement) else self.convert(value)

    def inv(self, a):
        return a.inverse()

    def generator(self):
        return QuadElement(0, 1, self.D)

    def contains(self, other):
        return other == self or other == QQ

    def descend(self, value, target):
        if target == self:
            return value
        if target == QQ:
            if value.b:
                raise FieldMismatchError(f"{value} is not rational")
            return value.a
        raise FieldMismatchError(f"cannot move {self} values into {target}")


@lru_cache(maxsize=None)
def quadratic_field(D: int) -> QuadraticField:
    return QuadraticField(D)


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel of a nonzero integer."""
    from sympy import factorint

    sign = -1 if n < 0 else 1
    out = 1
    for prime, e in factorint(abs(n)).items():
        if e % 2:
            out *= prime
    return sign * out


_QUAD_TAG = re.compile(r"^Q\(sqrt\((-?\d+)\)\)$")


def field_from_tag(tag) -> Field:
    """Parse ``Q``, a prime, or ``Q(sqrt(D))``."""
    text = str(tag).strip()
    if text.upper() == "Q":
        return QQ
    m = _QUAD_TAG.match(text.replace(" ", ""))
    if m:
        return quadratic_field(int(m.group(1)))
    try:
        p = int(text)
    except ValueError:
        raise ValueError(f"unknown field {tag!r}; expected Q, a prime, or Q(sqrt(D))") from None
    return GF(p)


def common_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatchError(f"field mismatch: {first} vs {f}")
    return first
