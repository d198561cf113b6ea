"""Exact arithmetic in the quadratic field Q(sqrt(d)).

Only what the dihedral root systems I2(3) and I2(6) need: their root
coordinates live in Q(sqrt(3)), and keeping them exact lets the polynomial
operator algebra stay exact as well.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


class QuadSurd:
    """Number ``a + b*sqrt(d)`` with rational ``a``, ``b`` and squarefree ``d > 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=3):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    # construction helpers -------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadSurd):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise ValueError("mixing different quadratic fields")
            return other
        if isinstance(other, (int, Rational)):
            return QuadSurd(other, 0, self.d)
        return NotImplemented

    def simplify(self):
        """Return a plain Fraction when the surd part vanishes."""
        if self.b == 0:
            return self.a
        return self

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return float(self) + other
        other = lifted
        return QuadSurd(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return float(self) - other
        other = lifted
        return QuadSurd(self.a - other.a, self.b - other.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return float(self) * other
        other = lifted
        return QuadSurd(self.a * other.a + self.d * self.b * other.b,
                        self.a * other.b + self.b * other.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadSurd(self.a, -self.b, self.d)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return float(self) / other
        other = lifted
        n = other.field_norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(%d))" % self.d)
        num = self * other.conjugate()
        return QuadSurd(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        return QuadSurd(other, 0, self.d) / self

    def __pow__(self, n: int):
        if n < 0:
            return QuadSurd(1, 0, self.d) / (self ** -n)
        out = QuadSurd(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparisons / conversions -------------------------------------------
    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return float(self) == other
        other = lifted
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self))

    def __abs__(self):
        return self if float(self) >= 0 else -self

    def __lt__(self, other):
        return float(self - other) < 0

    def __gt__(self, other):
        return float(self - other) > 0

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"

    def to_json(self):
        return {"rational": str(self.a), "surd": str(self.b), "radicand": self.d}

    @classmethod
    def from_json(cls, obj):
        return cls(Fraction(obj["rational"]), Fraction(obj["surd"]), obj["radicand"])


def sqrt3() -> QuadSurd:
    return QuadSurd(0, 1, 3)
