# Author: Ozy
"""
Laurent polynomials and rational functions in the formal variable z over Q(w).

Every denominator the series engine produces is a product of binomials
1 - e*z^d, so a RatFunc keeps its denominator factored: a multiset of the
integral factors P_1 = 1 - z and P_k = Phi_k(z) (k >= 2), each with constant
term 1, times an optional general polynomial `extra` (constant term 1) for
the rare binomials whose coefficient is a proper cube root of unity.
Numerators are kept coprime to the denominator.
"""

import cmath
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import cyclotomic_poly, divisors, totient

from errors import NearPoleError, PoleFactorError, ZeroDenominatorError
from exact_arith import CycloRational, Scalar, canon, cyclo_inv

logger = logging.getLogger(__name__)

# |den(point)| below this is treated as a pole by RatFunc.evaluate
NEAR_POLE_THRESHOLD = 1e-12

# Integer products with at least this many coefficient pairs go through
# Kronecker substitution.
KRONECKER_CUTOFF = 64


def _sdiv(a: Scalar, b: Scalar) -> Scalar:
    if b == 1:
        return a
    if b == -1:
        return -a
    if isinstance(a, int) and isinstance(b, int):
        return canon(Fraction(a, b))
    if isinstance(b, CycloRational) or isinstance(a, CycloRational):
        return canon(a * cyclo_inv(b))
    return canon(a / b)


def _max_abs(coeffs: Sequence[int]) -> int:
    return max(abs(x) for x in coeffs)


def _kron_pack(coeffs: Sequence[int], bits: int) -> int:
    v = 0
    for x in reversed(coeffs):
        v = (v << bits) + x
    return v


def _kron_unpack(v: int, bits: int, n: int) -> List[int]:
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    full = 1 << bits
    out = []
    for _ in range(n):
        r = v & mask
        v >>= bits
        if r >= half:
            r -= full
            v += 1
        out.append(r)
    return out


class LaurentPoly:
    """Dense Laurent polynomial: coefficients c[i] of z^(lo + i). Zero is (0, ())."""

    __slots__ = ('lo', 'c', '_integral')

    def __init__(self, lo: int = 0, coeffs: Iterable[Scalar] = ()):
        c = list(coeffs)
        start, end = 0, len(c)
        while start < end and not c[start]:
            start += 1
        while end > start and not c[end - 1]:
            end -= 1
        if start == end:
            self.lo = 0
            self.c = ()
        else:
            self.lo = lo + start
            self.c = tuple(c[start:end])
        self._integral = None

    @classmethod
    def monomial(cls, coeff: Scalar, exp: int) -> 'LaurentPoly':
        return cls(exp, (coeff,))

    @classmethod
    def from_terms(cls, terms: Dict[int, Scalar]) -> 'LaurentPoly':
        """Build from a sparse {exponent: coefficient} map."""
        terms = {e: v for e, v in terms.items() if v}
        if not terms:
            return ZERO_POLY
        lo = min(terms)
        hi = max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, v in terms.items():
            coeffs[e - lo] = v
        return cls(lo, coeffs)

    def is_zero(self) -> bool:
        return not self.c

    def is_integral(self) -> bool:
        if self._integral is None:
            self._integral = all(type(x) is int for x in self.c)
        return self._integral

    @property
    def hi(self) -> int:
        return self.lo + len(self.c) - 1

    def coeff(self, e: int) -> Scalar:
        i = e - self.lo
        if 0 <= i < len(self.c):
            return self.c[i]
        return 0

    def canonical(self) -> 'LaurentPoly':
        if self.is_integral():
            return self
        return LaurentPoly(self.lo, [canon(x) for x in self.c])

    def shift(self, k: int) -> 'LaurentPoly':
        if not self.c or k == 0:
            return self
        return LaurentPoly(self.lo + k, self.c)

    def scale(self, s: Scalar) -> 'LaurentPoly':
        if s == 1:
            return self
        if not s:
            return ZERO_POLY
        return LaurentPoly(self.lo, [x * s for x in self.c])

    def __neg__(self):
        return LaurentPoly(self.lo, [-x for x in self.c])

    def __add__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        if not other.c:
            return self
        if not self.c:
            return other
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0] * (hi - lo + 1)
        off = self.lo - lo
        for i, x in enumerate(self.c):
            out[off + i] = x
        off = other.lo - lo
        for i, x in enumerate(other.c):
            out[off + i] = out[off + i] + x
        return LaurentPoly(lo, out)

    def __sub__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        return self + (-other)

    def __mul__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        return lp_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.lo == other.lo and self.c == other.c

    def __hash__(self):
        return hash((self.lo, self.c))

    def evaluate(self, point: complex) -> complex:
        acc = 0j
        for x in reversed(self.c):
            acc = acc * point + complex(x)
        if self.lo:
            acc *= point ** self.lo
        return acc

    def __repr__(self):
        return f"LaurentPoly({self.lo}, {list(self.c)})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            e = self.lo + i
            mono = "" if e == 0 else ("z" if e == 1 else f"z^{e}")
            if mono and x == 1:
                parts.append(mono)
            elif mono and x == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{x}{'*' + mono if mono else ''}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO_POLY = LaurentPoly()
ONE_POLY = LaurentPoly(0, (1,))


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact product; degree bounds add."""
    if not p.c or not q.c:
        return ZERO_POLY
    n, m = len(p.c), len(q.c)
    if n == 1:
        return q.scale(p.c[0]).shift(p.lo)
    if m == 1:
        return p.scale(q.c[0]).shift(q.lo)
    if n * m >= KRONECKER_CUTOFF and p.is_integral() and q.is_integral():
        bound = _max_abs(p.c) * _max_abs(q.c) * min(n, m)
        bits = bound.bit_length() + 2
        prod = _kron_pack(p.c, bits) * _kron_pack(q.c, bits)
        return LaurentPoly(p.lo + q.lo, _kron_unpack(prod, bits, n + m - 1))
    out = [0] * (n + m - 1)
    qc = q.c
    for i, a in enumerate(p.c):
        if not a:
            continue
        for j, b in enumerate(qc):
            if b:
                out[i + j] = out[i + j] + a * b
    return LaurentPoly(p.lo + q.lo, out)


def lp_dot(pairs: Sequence[Tuple[LaurentPoly, LaurentPoly]]) -> LaurentPoly:
    """Sum of products, packed into a single big-integer accumulation when integral."""
    pairs = [(a, b) for a, b in pairs if a.c and b.c]
    if not pairs:
        return ZERO_POLY
    if len(pairs) == 1:
        return lp_mul(*pairs[0])
    if all(a.is_integral() and b.is_integral() for a, b in pairs):
        lo = min(a.lo + b.lo for a, b in pairs)
        hi = max(a.hi + b.hi for a, b in pairs)
        bound = sum(_max_abs(a.c) * _max_abs(b.c) * min(len(a.c), len(b.c)) for a, b in pairs)
        bits = bound.bit_length() + 2
        total = 0
        for a, b in pairs:
            total += (_kron_pack(a.c, bits) * _kron_pack(b.c, bits)) << (bits * (a.lo + b.lo - lo))
        return LaurentPoly(lo, _kron_unpack(total, bits, hi - lo + 1))
    acc = ZERO_POLY
    for a, b in pairs:
        acc = acc + lp_mul(a, b)
    return acc


# Cyclotomic factors ---------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_factor(k: int) -> Tuple[int, ...]:
    """Ascending coefficients of P_1 = 1 - z or P_k = Phi_k(z)."""
    if k == 1:
        return (1, -1)
    coeffs = cyclotomic_poly(k, polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def cyclotomic_poly_lp(k: int) -> LaurentPoly:
    return LaurentPoly(0, cyclotomic_factor(k))


@lru_cache(maxsize=None)
def _candidate_orders(degree: int) -> Tuple[int, ...]:
    """All k whose cyclotomic factor has degree <= degree."""
    out = []
    k = 1
    # totient(k) >= sqrt(k/2) bounds the search
    while k <= 2 * degree * degree + 2:
        if int(totient(k)) <= degree:
            out.append(k)
        k += 1
    return tuple(out)


@lru_cache(maxsize=4096)
def _cyc_product(factors: Tuple[Tuple[int, int], ...]) -> LaurentPoly:
    acc = ONE_POLY
    for k, m in factors:
        for _ in range(m):
            acc = lp_mul(acc, cyclotomic_poly_lp(k))
    return acc


def _divide_exact(a: Sequence[Scalar], d: Sequence[Scalar]) -> Optional[List[Scalar]]:
    """Quotient a/d for ascending coefficient lists when d divides a exactly, else None.

    d[0] must be nonzero; the division runs from the constant term upward.
    """
    n = len(a) - 1
    m = len(d) - 1
    if n < m:
        return None
    d0 = d[0]
    sparse = [(j, dj) for j, dj in enumerate(d) if j and dj]
    qlen = n - m + 1
    q = [0] * qlen
    for i in range(qlen):
        s = a[i]
        for j, dj in sparse:
            if j > i:
                break
            s = s - dj * q[i - j]
        q[i] = s if d0 == 1 else _sdiv(s, d0)
    for i in range(qlen, n + 1):
        s = a[i]
        for j in range(max(0, i - qlen + 1), min(m, i) + 1):
            dj = d[j]
            if dj:
                s = s - dj * q[i - j]
        if s:
            return None
    return q


def _maybe_divisible(coeffs: Sequence[Scalar], k: int) -> bool:
    if k == 1:
        return sum(coeffs) == 0
    if k == 2:
        return sum(x if i % 2 == 0 else -x for i, x in enumerate(coeffs)) == 0
    return len(coeffs) > len(cyclotomic_factor(k)) - 1


def _strip_factor(coeffs: List[Scalar], k: int, limit: Optional[int] = None) -> Tuple[List[Scalar], int]:
    """Divide out P_k as often as possible (at most `limit` times)."""
    f = cyclotomic_factor(k)
    count = 0
    while (limit is None or count < limit) and len(coeffs) > 1 and _maybe_divisible(coeffs, k):
        q = _divide_exact(coeffs, f)
        if q is None:
            break
        coeffs = q
        count += 1
    return coeffs, count


def _poly_gcd(a: Sequence[Scalar], b: Sequence[Scalar]) -> List[Scalar]:
    """Monic Euclidean gcd of ascending coefficient lists over Q(w)."""
    def trim(p):
        p = list(p)
        while p and not p[-1]:
            p.pop()
        return p

    x, y = trim(a), trim(b)
    while y:
        # remainder of x by y, working from the top
        x = list(x)
        lead = y[-1]
        while len(x) >= len(y) and x:
            factor = _sdiv(x[-1], lead)
            shift = len(x) - len(y)
            for i, yc in enumerate(y):
                x[shift + i] = x[shift + i] - factor * yc
            x = trim(x)
        x, y = y, x
    if not x:
        return [1]
    lead = x[-1]
    return [_sdiv(c, lead) for c in x]


def _merge_cyc(a: Tuple[Tuple[int, int], ...], b: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for k, m in b:
        out[k] = out.get(k, 0) + m
    return tuple(sorted(out.items()))


def _mul_extra(a: Optional[LaurentPoly], b: Optional[LaurentPoly]) -> Optional[LaurentPoly]:
    if a is None:
        return b
    if b is None:
        return a
    return lp_mul(a, b)


def split_cyclotomic(poly: LaurentPoly) -> Tuple[Scalar, int, Tuple[Tuple[int, int], ...], Optional[LaurentPoly]]:
    """Factor poly = unit * z^lo * prod P_k^m * rest with rest(0) = 1.

    Returns (unit, lo, cyc, rest) where rest is None when it is 1.
    """
    if poly.is_zero():
        raise ZeroDenominatorError("cannot factor the zero polynomial")
    unit = poly.c[0]
    coeffs = [_sdiv(x, unit) for x in poly.c]
    cyc = []
    if len(coeffs) > 1:
        for k in _candidate_orders(len(coeffs) - 1):
            if len(coeffs) - 1 < len(cyclotomic_factor(k)) - 1:
                continue
            if k > 2 and not _near_root(coeffs, k):
                continue
            coeffs, count = _strip_factor(coeffs, k)
            if count:
                cyc.append((k, count))
            if len(coeffs) == 1:
                break
    rest = LaurentPoly(0, coeffs)
    if len(rest.c) <= 1:
        rest = None
    return unit, poly.lo, tuple(sorted(cyc)), rest


def _near_root(coeffs: Sequence[Scalar], k: int) -> bool:
    """Cheap float screen: does the polynomial nearly vanish at exp(2 pi i / k)?"""
    root = cmath.exp(2j * cmath.pi / k)
    try:
        acc = 0j
        scale = 0.0
        for x in reversed(coeffs):
            cx = complex(x)
            acc = acc * root + cx
            scale += abs(cx)
    except OverflowError:
        return True
    return abs(acc) <= 1e-6 * max(scale, 1.0)


class RatFunc:
    """Normalized rational function num / (prod P_k^m * extra)."""

    __slots__ = ('num', 'cyc', 'extra')

    def __init__(self, num: LaurentPoly, cyc: Tuple[Tuple[int, int], ...] = (),
                 extra: Optional[LaurentPoly] = None):
        self.num = num
        self.cyc = cyc
        self.extra = extra

    def __reduce__(self):
        return (RatFunc, (self.num, self.cyc, self.extra))

    # Constructors ---------------------------------------------------------

    @classmethod
    def const(cls, s: Scalar) -> 'RatFunc':
        if not s:
            return RF_ZERO
        return cls(LaurentPoly(0, (canon(s),)))

    @classmethod
    def monomial(cls, s: Scalar, exp: int) -> 'RatFunc':
        if not s:
            return RF_ZERO
        return cls(LaurentPoly(exp, (canon(s),)))

    @classmethod
    def poly(cls, p: LaurentPoly) -> 'RatFunc':
        return cls(p)

    @staticmethod
    def _reduce(num: LaurentPoly, cyc: Tuple[Tuple[int, int], ...],
                extra: Optional[LaurentPoly]) -> 'RatFunc':
        if num.is_zero():
            return RF_ZERO
        coeffs = list(num.c)
        new_cyc = []
        for k, m in cyc:
            if m <= 0:
                continue
            coeffs, count = _strip_factor(coeffs, k, m)
            if m - count:
                new_cyc.append((k, m - count))
        if extra is not None:
            g = _poly_gcd(coeffs, extra.c)
            if len(g) > 1:
                g0 = g[0]
                g = [_sdiv(x, g0) for x in g]
                coeffs = _divide_exact(coeffs, g)
                ext = _divide_exact(list(extra.c), g)
                extra = LaurentPoly(0, ext) if len(ext) > 1 else None
        num = LaurentPoly(num.lo, coeffs).canonical()
        return RatFunc(num, tuple(new_cyc), extra)

    # Queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.c

    def is_polynomial(self) -> bool:
        return not self.cyc and self.extra is None

    def is_constant(self) -> bool:
        """z-free: a scalar."""
        return self.is_polynomial() and (not self.num.c or (self.num.lo == 0 and len(self.num.c) == 1))

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.num.c[0] if self.num.c else 0

    def coefficients(self) -> Tuple[Scalar, ...]:
        """Scalars appearing anywhere in the normalized form."""
        out = tuple(self.num.c)
        if self.extra is not None:
            out += tuple(self.extra.c)
        return out

    def den_poly(self) -> LaurentPoly:
        d = _cyc_product(self.cyc)
        if self.extra is not None:
            d = lp_mul(d, self.extra)
        return d

    # Arithmetic -----------------------------------------------------------

    def __neg__(self):
        if not self.num.c:
            return self
        return RatFunc(-self.num, self.cyc, self.extra)

    def scale(self, s: Scalar) -> 'RatFunc':
        if not s:
            return RF_ZERO
        if s == 1:
            return self
        return RatFunc(self.num.scale(s).canonical(), self.cyc, self.extra)

    def shift(self, k: int) -> 'RatFunc':
        """Multiply by z^k."""
        if k == 0 or not self.num.c:
            return self
        return RatFunc(self.num.shift(k), self.cyc, self.extra)

    def __add__(self, other: 'RatFunc') -> 'RatFunc':
        if not isinstance(other, RatFunc):
            other = RatFunc.const(other)
        if not other.num.c:
            return self
        if not self.num.c:
            return other
        if self.cyc == other.cyc and self.extra == other.extra:
            num = self.num + other.num
            if not self.cyc and self.extra is None:
                return RatFunc(num.canonical())
            return RatFunc._reduce(num, self.cyc, self.extra)
        da, db = dict(self.cyc), dict(other.cyc)
        lcm = {k: max(da.get(k, 0), db.get(k, 0)) for k in set(da) | set(db)}
        cof_a = _cyc_product(tuple(sorted((k, m - da.get(k, 0)) for k, m in lcm.items() if m > da.get(k, 0))))
        cof_b = _cyc_product(tuple(sorted((k, m - db.get(k, 0)) for k, m in lcm.items() if m > db.get(k, 0))))
        if self.extra == other.extra:
            extra = self.extra
        else:
            extra = _mul_extra(self.extra, other.extra)
            if other.extra is not None:
                cof_a = lp_mul(cof_a, other.extra)
            if self.extra is not None:
                cof_b = lp_mul(cof_b, self.extra)
        num = lp_mul(self.num, cof_a) + lp_mul(other.num, cof_b)
        return RatFunc._reduce(num, tuple(sorted(lcm.items())), extra)

    __radd__ = __add__

    def __sub__(self, other: 'RatFunc') -> 'RatFunc':
        if not isinstance(other, RatFunc):
            other = RatFunc.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.const(other) - self

    def __mul__(self, other: 'RatFunc') -> 'RatFunc':
        if not isinstance(other, RatFunc):
            return self.scale(other)
        if not self.num.c or not other.num.c:
            return RF_ZERO
        num = lp_mul(self.num, other.num)
        if self.is_polynomial() and other.is_polynomial():
            return RatFunc(num.canonical())
        return RatFunc._reduce(num, _merge_cyc(self.cyc, other.cyc), _mul_extra(self.extra, other.extra))

    __rmul__ = __mul__

    def inv(self) -> 'RatFunc':
        if not self.num.c:
            raise ZeroDenominatorError("inverse of the zero rational function")
        unit, lo, cyc, rest = split_cyclotomic(self.num)
        num = self.den_poly().scale(cyclo_inv(unit)).shift(-lo).canonical()
        return RatFunc(num, cyc, rest)

    def __truediv__(self, other: 'RatFunc') -> 'RatFunc':
        if not isinstance(other, RatFunc):
            if not other:
                raise ZeroDenominatorError("division by zero")
            return self.scale(cyclo_inv(other))
        return self * other.inv()

    @staticmethod
    def dot(pairs: Iterable[Tuple['RatFunc', 'RatFunc']]) -> 'RatFunc':
        """Sum of products, reducing once per denominator signature."""
        groups: Dict[tuple, list] = {}
        for a, b in pairs:
            if not a.num.c or not b.num.c:
                continue
            key = (_merge_cyc(a.cyc, b.cyc), _mul_extra(a.extra, b.extra))
            groups.setdefault(key, []).append((a.num, b.num))
        total = RF_ZERO
        for (cyc, extra), polys in groups.items():
            num = lp_dot(polys)
            if not cyc and extra is None:
                part = RatFunc(num.canonical())
            else:
                part = RatFunc._reduce(num, cyc, extra)
            total = total + part
        return total

    # Comparison and evaluation -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (int, Fraction, CycloRational)):
                other = RatFunc.const(other)
            else:
                return NotImplemented
        if self.num == other.num and self.cyc == other.cyc and self.extra == other.extra:
            return True
        return (self - other).is_zero()

    __hash__ = None

    def evaluate(self, point: complex) -> complex:
        den = 1 + 0j
        for k, m in self.cyc:
            den *= cyclotomic_poly_lp(k).evaluate(point) ** m
        if self.extra is not None:
            den *= self.extra.evaluate(point)
        if abs(den) < NEAR_POLE_THRESHOLD:
            raise NearPoleError(f"denominator {abs(den):.3e} below {NEAR_POLE_THRESHOLD:g} at z={point}", abs(den))
        return self.num.evaluate(point) / den

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.cyc!r}, {self.extra!r})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        den = " ".join(f"P{k}^{m}" if m > 1 else f"P{k}" for k, m in self.cyc)
        if self.extra is not None:
            den = (den + " " if den else "") + f"({self.extra})"
        return f"({self.num})/({den})"


RF_ZERO = RatFunc(ZERO_POLY)
RF_ONE = RatFunc(ONE_POLY)


def binomial_inverse(phase: Scalar, d: int) -> RatFunc:
    """1 / (1 - phase * z^d) in normalized form."""
    if d == 0:
        value = 1 - phase
        if not value:
            raise PoleFactorError("factor 1 - 1 vanishes identically")
        return RatFunc.const(cyclo_inv(canon(value)))
    if d < 0:
        inv_phase = canon(cyclo_inv(phase))
        return binomial_inverse(inv_phase, -d).scale(-inv_phase).shift(-d)
    if phase == 1:
        cyc = tuple((k, 1) for k in divisors(d))
        return RatFunc(ONE_POLY, cyc)
    if phase == -1:
        cyc = tuple((k, 1) for k in divisors(2 * d) if d % k != 0)
        return RatFunc(ONE_POLY, cyc)
    coeffs = [0] * (d + 1)
    coeffs[0] = 1
    coeffs[d] = -phase
    return RatFunc(ONE_POLY, (), LaurentPoly(0, coeffs))


def rf_normalize(num: LaurentPoly, den: LaurentPoly) -> RatFunc:
    """Canonical reduced form of num / den."""
    if den.is_zero():
        raise ZeroDenominatorError("zero denominator")
    if num.is_zero():
        return RF_ZERO
    unit, lo, cyc, rest = split_cyclotomic(den)
    scaled = num.scale(cyclo_inv(unit)).shift(-lo)
    return RatFunc._reduce(scaled, cyc, rest)


def rf_arith(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    """Field arithmetic dispatch: op in {add, sub, mul, div}."""
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    if op == 'div':
        return a / b
    raise ValueError(f"unknown operation: {op}")


def rf_eval(f: RatFunc, point: complex) -> complex:
    return f.evaluate(point)
