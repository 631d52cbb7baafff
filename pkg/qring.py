# Author: Ozy
"""
Truncated formal Laurent series in q with coefficients in Q(w)(z).

A Series stores the coefficients of q^e for min_exp <= e <= order; every
coefficient up to `order` is exact and nothing is known beyond it. Products
follow the usual precision bookkeeping: multiplying by a factor of q-valuation
v shifts both ends by v, so the relative precision order - min_exp is
preserved through the whole product pipeline of expand_product.
"""

import cmath
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Protocol, Sequence, Tuple

from errors import (
    DegenerateSpecializationError,
    NonUnitSeriesError,
    UnboundedSeriesError,
    UnsupportedFieldError,
)
from exact_arith import OMEGA, CycloRational, Scalar, canon, cyclo_inv, omega_power
from zfield import RF_ONE, RF_ZERO, LaurentPoly, RatFunc, binomial_inverse

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)
THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class Monomial:
    """sign * exp(2 pi i turn) * q^q * z^z with turn kept in [0, 1/2)."""

    sign: int = 1
    q: int = 0
    z: int = 0
    turn: Fraction = Fraction(0)

    @staticmethod
    def make(sign: int = 1, q: int = 0, z: int = 0, turn=0) -> 'Monomial':
        t = Fraction(turn) % 1
        if t >= HALF:
            t -= HALF
            sign = -sign
        return Monomial(sign, q, z, t)

    def phase(self) -> Scalar:
        """exp(2 pi i turn) as an element of Q(w)."""
        if self.turn == 0:
            return 1
        if self.turn == SIXTH:
            return CycloRational(1, 1)
        if self.turn == THIRD:
            return OMEGA
        raise UnsupportedFieldError(f"phase exp(2 pi i * {self.turn}) is not in Q(w)")

    def coefficient(self) -> Scalar:
        return canon(self.sign * self.phase())

    def complex_coefficient(self) -> complex:
        return self.sign * cmath.exp(2j * cmath.pi * float(self.turn))

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        return Monomial.make(self.sign * other.sign, self.q + other.q,
                             self.z + other.z, self.turn + other.turn)

    def inverse(self) -> 'Monomial':
        return Monomial.make(self.sign, -self.q, -self.z, -self.turn)

    def __truediv__(self, other: 'Monomial') -> 'Monomial':
        return self * other.inverse()

    def __pow__(self, k: int) -> 'Monomial':
        sign = self.sign if k % 2 else 1
        return Monomial.make(sign, self.q * k, self.z * k, self.turn * k)

    def __neg__(self):
        return Monomial(-self.sign, self.q, self.z, self.turn)

    def is_one(self) -> bool:
        return self.sign == 1 and self.q == 0 and self.z == 0 and self.turn == 0

    def is_scalar(self) -> bool:
        return self.q == 0 and self.z == 0

    def __str__(self):
        parts = []
        if self.turn == THIRD:
            parts.append("w")
        elif self.turn == SIXTH:
            parts.append("(1+w)")
        elif self.turn:
            parts.append(f"e({self.turn})")
        for name, e in (("q", self.q), ("z", self.z)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        body = " ".join(parts) or "1"
        return ("-" if self.sign < 0 else "") + body


ONE_MONO = Monomial()
Q_MONO = Monomial(1, 1, 0)


def _binomial_poly(w: Monomial) -> LaurentPoly:
    """1 - phase * z^d as a Laurent polynomial in z."""
    return LaurentPoly.from_terms({0: 1, w.z: -w.coefficient()}) if w.z else \
        LaurentPoly(0, (canon(1 - w.coefficient()),))


class Series:
    """Coefficients coeffs[i] of q^(min_exp + i), exact through q^order."""

    __slots__ = ('min_exp', 'order', 'coeffs')

    def __init__(self, min_exp: int, order: int, coeffs: Sequence[RatFunc]):
        self.min_exp = min_exp
        self.order = order
        n = max(0, order - min_exp + 1)
        coeffs = list(coeffs[:n])
        if len(coeffs) < n:
            coeffs.extend([RF_ZERO] * (n - len(coeffs)))
        self.coeffs = coeffs

    def __reduce__(self):
        return (Series, (self.min_exp, self.order, self.coeffs))

    @classmethod
    def zero(cls, order: int) -> 'Series':
        return cls(order + 1, order, [])

    @classmethod
    def one(cls, order: int) -> 'Series':
        if order < 0:
            return cls.zero(order)
        return cls(0, order, [RF_ONE])

    @classmethod
    def from_terms(cls, terms, order: int) -> 'Series':
        """Series from a {exponent: RatFunc} map, truncated at order."""
        terms = {e: v for e, v in terms.items() if e <= order and not v.is_zero()}
        if not terms:
            return cls.zero(order)
        lo = min(terms)
        coeffs = [RF_ZERO] * (order - lo + 1)
        for e, v in terms.items():
            coeffs[e - lo] = v
        return cls(lo, order, coeffs)

    # Queries --------------------------------------------------------------

    def coeff(self, e: int) -> RatFunc:
        if e > self.order:
            raise ValueError(f"coefficient q^{e} is beyond the truncation order {self.order}")
        if e < self.min_exp:
            return RF_ZERO
        return self.coeffs[e - self.min_exp]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self) -> Optional[int]:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return self.min_exp + i
        return None

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.min_exp + i, c

    def trim(self) -> 'Series':
        """Drop leading zero coefficients."""
        v = self.valuation()
        if v is None:
            return Series.zero(self.order)
        if v == self.min_exp:
            return self
        return Series(v, self.order, self.coeffs[v - self.min_exp:])

    def truncate(self, order: int) -> 'Series':
        if order >= self.order:
            return self
        if order < self.min_exp:
            return Series.zero(order)
        return Series(self.min_exp, order, self.coeffs)

    # Linear operations ----------------------------------------------------

    def __add__(self, other: 'Series') -> 'Series':
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        if lo > order:
            return Series.zero(order)
        coeffs = []
        for e in range(lo, order + 1):
            a = self.coeff(e)
            b = other.coeff(e)
            coeffs.append(a + b if not b.is_zero() else a)
        return Series(lo, order, coeffs)

    def __neg__(self):
        return Series(self.min_exp, self.order, [-c for c in self.coeffs])

    def __sub__(self, other: 'Series') -> 'Series':
        return self + (-other)

    def mul_const(self, c) -> 'Series':
        """Multiply by a z-rational function or scalar free of q."""
        if not isinstance(c, RatFunc):
            c = RatFunc.const(c)
        if c.is_zero():
            return Series.zero(self.order)
        if c.is_constant() and c.constant_value() == 1:
            return self
        return Series(self.min_exp, self.order, [x * c if not x.is_zero() else x for x in self.coeffs])

    def mul_monomial(self, m: Monomial) -> 'Series':
        coeff = m.coefficient()
        coeffs = [x.scale(coeff).shift(m.z) for x in self.coeffs]
        return Series(self.min_exp + m.q, self.order + m.q, coeffs)

    def mul_binomial(self, w: Monomial) -> 'Series':
        """Multiply by (1 - w)."""
        c = w.q
        if c > 0 and self.min_exp + c > self.order:
            return self
        if c == 0:
            return self.mul_const(RatFunc.poly(_binomial_poly(w)))
        shifted = self.mul_monomial(w)
        return self - shifted if c > 0 else (-shifted) + self.truncate(shifted.order)

    def div_binomial(self, w: Monomial) -> 'Series':
        """Divide by (1 - w)."""
        c = w.q
        if c == 0:
            return self.mul_const(binomial_inverse(w.coefficient(), w.z))
        if c < 0:
            inv = w.inverse()
            return self.mul_monomial(-inv).div_binomial(inv)
        # b_e = a_e + phase z^d b_(e-c)
        phase = w.coefficient()
        out: List[RatFunc] = []
        for i, a in enumerate(self.coeffs):
            if i >= c:
                prev = out[i - c]
                if not prev.is_zero():
                    a = a + prev.scale(phase).shift(w.z)
            out.append(a)
        return Series(self.min_exp, self.order, out)

    def mul(self, other: 'Series') -> 'Series':
        lo = self.min_exp + other.min_exp
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        if lo > order:
            return Series.zero(order)
        a_nz = [(e, c) for e, c in self.items()]
        b_map = {e: c for e, c in other.items()}
        if not a_nz or not b_map:
            return Series.zero(order)
        coeffs = []
        for e in range(lo, order + 1):
            pairs = []
            for i, ca in a_nz:
                j = e - i
                if j < other.min_exp:
                    break
                cb = b_map.get(j)
                if cb is not None:
                    pairs.append((ca, cb))
            coeffs.append(RatFunc.dot(pairs) if pairs else RF_ZERO)
        return Series(lo, order, coeffs)

    __mul__ = mul

    def invert(self) -> 'Series':
        """Multiplicative inverse; needs a known nonzero lowest coefficient."""
        s = self.trim()
        m = s.valuation()
        if m is None:
            raise NonUnitSeriesError(f"no nonzero coefficient through q^{self.order}")
        precision = s.order - m
        lead_inv = s.coeffs[0].inv()
        out = [lead_inv]
        for k in range(1, precision + 1):
            pairs = [(s.coeffs[j], out[k - j]) for j in range(1, k + 1) if not s.coeffs[j].is_zero()]
            acc = RatFunc.dot(pairs) if pairs else RF_ZERO
            out.append(-(acc * lead_inv) if not acc.is_zero() else RF_ZERO)
        return Series(-m, -m + precision, out)

    # Substitutions --------------------------------------------------------

    def twist(self, t: int) -> 'Series':
        """q -> w^t q, for series whose coefficients are free of z."""
        if any(not c.is_constant() for c in self.coeffs):
            raise ValueError("twist needs z-free coefficients")
        if t % 3 == 0:
            return self
        coeffs = [c.scale(omega_power(t * (self.min_exp + i))) for i, c in enumerate(self.coeffs)]
        return Series(self.min_exp, self.order, coeffs)

    def substitute(self, sign: int, s: int) -> 'Series':
        """q -> sign * q^s for s >= 1."""
        if s < 1:
            raise ValueError("substitution exponent must be positive")
        if sign == 1 and s == 1:
            return self
        terms = {}
        for e, c in self.items():
            terms[s * e] = -c if (sign < 0 and e % 2) else c
        order = s * self.order + s - 1
        if not terms:
            return Series.zero(order)
        out = Series.from_terms(terms, order)
        if out.min_exp > s * self.min_exp:
            out = Series(s * self.min_exp, order, [RF_ZERO] * (out.min_exp - s * self.min_exp) + out.coeffs)
        return out

    # Display --------------------------------------------------------------

    def __repr__(self):
        return f"Series(min_exp={self.min_exp}, order={self.order}, nonzero={sum(1 for _ in self.items())})"

    def __str__(self):
        terms = [f"({c}) q^{e}" for e, c in self.items()]
        return " + ".join(terms + [f"O(q^{self.order + 1})"])


# Product factors ------------------------------------------------------------

class PochFactor:
    """(arg; base)_count, or (arg; base)_inf when count is None."""

    def __init__(self, arg: Monomial, base: Monomial, count: Optional[int] = None):
        if count is None and base.q <= 0:
            raise UnboundedSeriesError(f"infinite product with base {base} has no positive q-power")
        if count is not None and count < 0:
            raise ValueError("finite Pochhammer length must be non-negative")
        self.arg = arg
        self.base = base
        self.count = count

    def _indices(self, cap: int):
        a, b = self.arg.q, self.base.q
        if self.count is not None:
            for i in range(self.count):
                c = a + i * b
                if c <= cap or c < 0:
                    yield i
            return
        i = 0
        while True:
            c = a + i * b
            if c > cap and c >= 0:
                return
            yield i
            i += 1

    def binomials(self, cap: int) -> List[Monomial]:
        """The w with (1 - w) a factor and w.q <= cap; every w.q < 0 is included."""
        return [self.arg * self.base ** i for i in self._indices(cap)]

    def valuation(self) -> int:
        return sum(min(0, w.q) for w in self.binomials(-1))

    def is_zero(self) -> bool:
        a, b = self.arg.q, self.base.q
        if b == 0:
            if self.count is None:
                return False
            return any((self.arg * self.base ** i).is_one() for i in range(self.count))
        if (-a) % b:
            return False
        i = -a // b
        if i < 0 or (self.count is not None and i >= self.count):
            return False
        return (self.arg * self.base ** i).is_one()

    def __repr__(self):
        n = "inf" if self.count is None else str(self.count)
        return f"({self.arg}; {self.base})_{n}"


class SparseFactor(Protocol):
    """A q-series factor expanded directly, such as a theta series."""

    def valuation(self) -> int: ...

    def is_zero(self) -> bool: ...

    def series(self, order: int) -> Series: ...


def expand_product(order: int, scalar: Scalar, prefactor: Monomial,
                   numer: Sequence[PochFactor], denom: Sequence[PochFactor],
                   sparse: Sequence[SparseFactor] = (),
                   seed_fn: Optional[Callable[[int], Series]] = None) -> Series:
    """scalar * prefactor * seed * prod(numer) * prod(sparse) / prod(denom) through q^order."""
    if not scalar:
        return Series.zero(order)
    for f in denom:
        if f.is_zero():
            raise DegenerateSpecializationError(f"denominator factor {f!r} vanishes")
    if any(f.is_zero() for f in numer) or any(f.is_zero() for f in sparse):
        return Series.zero(order)

    shift = (prefactor.q + sum(f.valuation() for f in numer)
             - sum(f.valuation() for f in denom) + sum(f.valuation() for f in sparse))
    if seed_fn is not None:
        x = seed_fn(order - shift).trim()
        if x.valuation() is None:
            return Series.zero(order)
        precision = x.order - x.min_exp
    else:
        precision = order - shift
        if precision < 0:
            return Series.zero(order)
        x = Series.one(precision)

    const = RF_ONE
    for f in numer:
        for w in f.binomials(precision):
            if w.q == 0:
                const = const * RatFunc.poly(_binomial_poly(w))
            else:
                x = x.mul_binomial(w)
    for f in denom:
        for w in f.binomials(precision):
            if w.q == 0:
                const = const * binomial_inverse(w.coefficient(), w.z)
            else:
                x = x.div_binomial(w)
    for f in sparse:
        x = x.mul(f.series(f.valuation() + precision))
    const = const.scale(canon(scalar))
    x = x.mul_const(const).mul_monomial(prefactor)
    return x.truncate(order)


def geom_factor_inverse(phase: Scalar, c: int, d: int, order: int) -> Series:
    """1 / (1 - phase q^c z^d) through q^order, for any sign of c."""
    if not phase:
        return Series.one(order)
    if c == 0:
        return Series.one(order).mul_const(binomial_inverse(phase, d))
    lead = max(0, -c)
    if order - lead < 0:
        return Series.zero(order)
    w = _monomial_from_phase(phase, c, d)
    return Series.one(order - lead).div_binomial(w)


def _monomial_from_phase(phase: Scalar, q: int, z: int) -> Monomial:
    for sign in (1, -1):
        for turn in (Fraction(0), SIXTH, THIRD):
            m = Monomial(sign, q, z, turn)
            if m.coefficient() == phase:
                return m
    raise UnsupportedFieldError(f"coefficient {phase} is not a root of unity in Q(w)")


def poch_inf(arg: Monomial, base: Monomial, order: int) -> Series:
    factor = PochFactor(arg, base)
    if factor.is_zero():
        logger.warning("(%s; %s)_inf has a vanishing factor; returning zero", arg, base)
    return expand_product(order, 1, ONE_MONO, [factor], [])


def poch_fin(arg: Monomial, base: Monomial, count: int, order: int) -> Series:
    return expand_product(order, 1, ONE_MONO, [PochFactor(arg, base, count)], [])
