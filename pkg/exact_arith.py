# Author: Ozy
"""
Exact scalars for the series kernel.

Rationals are carried by fractions.Fraction (plain ints are accepted wherever
a rational is). CycloRational extends them to Q(w), w a primitive cube root of
unity, using the basis {1, w} and the relation w^2 = -1 - w.
"""

import cmath
from fractions import Fraction
from typing import Union

from errors import CycloZeroDivisionError

Rational = Union[int, Fraction]

OMEGA_COMPLEX = cmath.exp(2j * cmath.pi / 3)


class CycloRational:
    """Element re + wc*w of Q(w). Immutable."""

    __slots__ = ('re', 'wc')

    def __init__(self, re: Rational = 0, wc: Rational = 0):
        object.__setattr__(self, 're', Fraction(re))
        object.__setattr__(self, 'wc', Fraction(wc))

    def __setattr__(self, name, value):
        raise AttributeError("CycloRational is immutable")

    def __reduce__(self):
        return (CycloRational, (self.re, self.wc))

    # Arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, CycloRational):
            return other
        if isinstance(other, (int, Fraction)):
            return CycloRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloRational(self.re + o.re, self.wc + o.wc)

    __radd__ = __add__

    def __neg__(self):
        return CycloRational(-self.re, -self.wc)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycloRational(self.re - o.re, self.wc - o.wc)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloRational(self.re * other, self.wc * other)
        if not isinstance(other, CycloRational):
            return NotImplemented
        return cyclo_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise CycloZeroDivisionError("division by zero in Q(w)")
            return CycloRational(self.re / other, self.wc / other)
        if not isinstance(other, CycloRational):
            return NotImplemented
        return cyclo_mul(self, cyclo_inv(other))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(o, cyclo_inv(self))

    def __pow__(self, k: int):
        if k < 0:
            return cyclo_inv(self) ** (-k)
        result = CycloRational(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # Comparison -----------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.wc == o.wc

    def __hash__(self):
        if self.wc == 0:
            return hash(self.re)
        return hash((self.re, self.wc))

    def __bool__(self):
        return bool(self.re) or bool(self.wc)

    def conjugate(self) -> 'CycloRational':
        """Galois conjugate a + b*w^2 = (a - b) - b*w."""
        return CycloRational(self.re - self.wc, -self.wc)

    def norm(self) -> Fraction:
        """a^2 - ab + b^2, positive for nonzero elements."""
        a, b = self.re, self.wc
        return a * a - a * b + b * b

    def __complex__(self):
        return complex(self.re) + complex(self.wc) * OMEGA_COMPLEX

    def __repr__(self):
        return f"CycloRational({self.re}, {self.wc})"

    def __str__(self):
        if self.wc == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.wc}*w"
        sign = '+' if self.wc > 0 else '-'
        return f"({self.re} {sign} {abs(self.wc)}*w)"


Scalar = Union[int, Fraction, CycloRational]

OMEGA = CycloRational(0, 1)
OMEGA2 = CycloRational(-1, -1)


def cyclo_mul(x: CycloRational, y: CycloRational) -> CycloRational:
    """Product in the basis {1, w}: (a + bw)(c + dw) = (ac - bd) + (ad + bc - bd)w."""
    a, b, c, d = x.re, x.wc, y.re, y.wc
    bd = b * d
    return CycloRational(a * c - bd, a * d + b * c - bd)


def cyclo_inv(x: Scalar) -> Scalar:
    """Multiplicative inverse; rationals stay rational."""
    if not isinstance(x, CycloRational):
        if x == 0:
            raise CycloZeroDivisionError("inverse of zero")
        return Fraction(1) / x
    n = x.norm()
    if n == 0:
        raise CycloZeroDivisionError("inverse of zero in Q(w)")
    conj = x.conjugate()
    return CycloRational(conj.re / n, conj.wc / n)


def is_rational(x: Scalar) -> bool:
    """True iff the w-component is zero."""
    if isinstance(x, CycloRational):
        return x.wc == 0
    return True


def canon(x: Scalar) -> Scalar:
    """Demote to the smallest carrier: CycloRational -> Fraction -> int."""
    if isinstance(x, CycloRational):
        if x.wc != 0:
            return x
        x = x.re
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def omega_power(k: int) -> Scalar:
    """w**k as a canonical scalar."""
    k %= 3
    if k == 0:
        return 1
    return OMEGA if k == 1 else OMEGA2


def parse_scalar(text: str) -> Scalar:
    """Parse '3/2' or a pair '[re,wc]' into a canonical scalar."""
    text = text.strip()
    if text.startswith('[') and text.endswith(']'):
        parts = [p.strip() for p in text[1:-1].split(',')]
        if len(parts) != 2:
            raise ValueError(f"expected [re,wc], got {text!r}")
        return canon(CycloRational(Fraction(parts[0]), Fraction(parts[1])))
    return canon(Fraction(text))


def scalar_parts(x: Scalar):
    """(re, wc) pair of Fractions for serialization."""
    if isinstance(x, CycloRational):
        return x.re, x.wc
    return Fraction(x), Fraction(0)
