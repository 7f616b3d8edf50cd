"""Exact scalar fields: the rationals and prime fields.

Rational scalars are :class:`fractions.Fraction` (lowest terms, positive
denominator); prime-field scalars are :class:`ModP` residues.  Plain ``int``
values are accepted everywhere and coerced on entry.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import MalformedInputError

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@total_ordering
class ModP:
    """A residue modulo a prime ``p``, normalised to ``0 <= value < p``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise MalformedInputError(
                    f"mixed prime fields GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise MalformedInputError(f"{other} has no image in GF({self.p})")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return ModP(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) / self

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.p == 0
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, ModP):
            return self.value < other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.p}"

    def __str__(self):
        return str(self.value)


class Field:
    """Descriptor for the scalar field: ``Field()`` is Q, ``Field(p)`` is GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not isinstance(p, int) or not is_prime(p):
                raise MalformedInputError(f"modulus {p!r} is not prime")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __call__(self, x):
        """Coerce ``x`` into this field, refusing scalars from another field."""
        if self.p is None:
            if isinstance(x, ModP):
                raise MalformedInputError(f"prime-field scalar {x!r} in a rational matrix")
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            if isinstance(x, str):
                return Fraction(x)
            raise MalformedInputError(f"cannot interpret {x!r} as a rational")
        if isinstance(x, ModP):
            if x.p != self.p:
                raise MalformedInputError(f"scalar from GF({x.p}) in a GF({self.p}) matrix")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise MalformedInputError(f"{x} has no image in GF({self.p})")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, int):
            return ModP(x, self.p)
        raise MalformedInputError(f"cannot interpret {x!r} in GF({self.p})")

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def contains(self, x) -> bool:
        if self.p is None:
            return isinstance(x, (int, Fraction)) and not isinstance(x, bool)
        return isinstance(x, ModP) and x.p == self.p

    def to_json(self, x) -> str | int:
        """Serialise a scalar: ``"p/q"`` strings for Q, integers for GF(p)."""
        x = self(x)
        if self.p is None:
            return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
        return x.value

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse ``"q"`` or ``"fp:P"``."""
        text = text.strip().lower()
        if text in ("q", "qq", "rational"):
            return cls()
        if text.startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise MalformedInputError(f"bad field descriptor {text!r}") from None
            return cls(p)
        raise MalformedInputError(f"bad field descriptor {text!r}")


QQ = Field()


def GF(p: int = DEFAULT_PRIME) -> Field:
    return Field(p)
