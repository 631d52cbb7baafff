# Author: Ozy
"""
Theta functions, Appell functions, the D_n combinations, the universal mock
theta function g and the Eulerian mock theta series, all as exact Series.

Every argument is a Monomial in q and z: a free variable that stays formal is
the monomial z, a specialized one is whatever monomial the suite assigns.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from errors import DegenerateSpecializationError
from exact_arith import Scalar
from qring import (
    ONE_MONO,
    Q_MONO,
    Monomial,
    PochFactor,
    Series,
    expand_product,
)
from zfield import RF_ZERO, LaurentPoly, RatFunc, binomial_inverse

logger = logging.getLogger(__name__)


def _q(e: int, sign: int = 1) -> Monomial:
    return Monomial(sign, e, 0)


@dataclass(frozen=True)
class ThetaSpec:
    """Theta(arg; base)."""

    arg: Monomial
    base: Monomial

    def __post_init__(self):
        if self.base.q < 1 or self.base.z != 0:
            raise ValueError(f"theta base must be a positive power of q, got {self.base}")


@dataclass(frozen=True)
class AppellSpec:
    """m(x, z; base)."""

    x: Monomial
    z: Monomial
    base: Monomial

    def __post_init__(self):
        if self.base.q < 1 or self.base.z != 0:
            raise ValueError(f"Appell base must be a positive power of q, got {self.base}")


class EulerianName(Enum):
    PHI10 = "phi10"
    PSI10 = "psi10"
    X10 = "X10"
    CHI10 = "chi10"
    PHI6 = "phi6"
    PSI6 = "psi6"
    F0 = "f0"
    F1 = "f1"
    F0_7TH = "F0"
    G_UNIVERSAL = "g"


# Theta ----------------------------------------------------------------------

def theta_factors(spec: ThetaSpec) -> List[PochFactor]:
    """(x; B)_inf (B/x; B)_inf (B; B)_inf."""
    x, b = spec.arg, spec.base
    return [PochFactor(x, b), PochFactor(b / x, b), PochFactor(b, b)]


def theta_is_zero(spec: ThetaSpec) -> bool:
    """Theta(x; B) vanishes exactly when x is an integral power of B."""
    return any(f.is_zero() for f in theta_factors(spec))


def theta_prod(spec: ThetaSpec, order: int) -> Series:
    return expand_product(order, 1, ONE_MONO, theta_factors(spec), [])


def _theta_terms(spec: ThetaSpec, order: int):
    """Yield (n, term monomial) for every bilateral term with q-exponent <= order."""
    b, a = spec.base.q, spec.arg.q
    start = round(0.5 - a / b)
    for step, n in ((1, start), (-1, start - 1)):
        while True:
            e = b * (n * (n - 1) // 2) + a * n
            # exponents grow monotonically away from the vertex
            beyond = (b * n + a > 0) if step > 0 else (b * (n - 1) + a < 0)
            if e > order and beyond:
                break
            if e <= order:
                term = spec.base ** (n * (n - 1) // 2) * spec.arg ** n
                yield n, term if n % 2 == 0 else -term
            n += step


def theta_valuation(spec: ThetaSpec) -> int:
    b, a = spec.base.q, spec.arg.q
    n0 = round(0.5 - a / b)
    return min(b * (n * (n - 1) // 2) + a * n for n in (n0 - 1, n0, n0 + 1))


def theta_sum(spec: ThetaSpec, order: int) -> Series:
    """Bilateral sum of (-1)^n B^C(n,2) x^n."""
    low = theta_valuation(spec)
    if low > order:
        return Series.zero(order)
    buckets: Dict[int, Dict[int, Scalar]] = {}
    for _, term in _theta_terms(spec, order):
        row = buckets.setdefault(term.q, {})
        row[term.z] = row.get(term.z, 0) + term.coefficient()
    terms = {e: RatFunc.poly(LaurentPoly.from_terms(row)) for e, row in buckets.items()}
    out = Series.from_terms(terms, order)
    if out.min_exp > low:
        out = Series(low, order, [RF_ZERO] * (out.min_exp - low) + out.coeffs)
    return out


class ThetaSeries:
    """Theta factor expanded through its bilateral sum inside expand_product."""

    def __init__(self, spec: ThetaSpec):
        self.spec = spec

    def valuation(self) -> int:
        return theta_valuation(self.spec)

    def is_zero(self) -> bool:
        return theta_is_zero(self.spec)

    def series(self, order: int) -> Series:
        return theta_sum(self.spec, order)

    def __repr__(self):
        return f"Theta({self.spec.arg}; {self.spec.base})"


def theta_abbrev_spec(kind: str, a: int, m: int) -> ThetaSpec:
    """plain Theta(q^a; q^m), bar Theta(-q^a; q^m), eta Theta(q^m; q^3m) = (q^m; q^m)_inf."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if kind == "plain":
        return ThetaSpec(_q(a), _q(m))
    if kind == "bar":
        return ThetaSpec(_q(a, -1), _q(m))
    if kind == "eta":
        return ThetaSpec(_q(m), _q(3 * m))
    raise ValueError(f"unknown theta abbreviation kind: {kind}")


def theta_abbrev(kind: str, a: int, m: int, order: int) -> Series:
    """Series of an abbreviation; for kind 'eta' the value of a is ignored."""
    return theta_prod(theta_abbrev_spec(kind, a, m), order)


# Appell ---------------------------------------------------------------------

def appell_pole(spec: AppellSpec) -> Optional[int]:
    """The r at which 1 - p^(r-1) x z vanishes identically, if any."""
    xz = spec.x * spec.z
    b = spec.base.q
    if xz.z != 0 or xz.q % b:
        return None
    r = 1 - xz.q // b
    return r if (spec.base ** (r - 1) * xz).is_one() else None


def appell_degenerate(spec: AppellSpec) -> Optional[str]:
    """Reason the specialization is undefined, or None."""
    if theta_is_zero(ThetaSpec(spec.z, spec.base)):
        return f"Theta({spec.z}; {spec.base}) vanishes in m({spec.x}, {spec.z}; {spec.base})"
    r = appell_pole(spec)
    if r is not None:
        return f"pole at r={r} in m({spec.x}, {spec.z}; {spec.base})"
    return None


def _appell_numerator_sum(spec: AppellSpec, order: int) -> Series:
    """sum_r (-1)^r p^C(r,2) z^r / (1 - p^(r-1) x z) through q^order."""
    p, x, z = spec.base, spec.x, spec.z
    b = p.q
    xz = x * z
    monos: Dict[int, Dict[int, Scalar]] = {}
    rational: Dict[int, List[RatFunc]] = {}

    def floor(r: int) -> int:
        c = b * (r - 1) + xz.q
        return b * (r * (r - 1) // 2) + z.q * r + max(0, -c)

    def add_mono(m: Monomial):
        row = monos.setdefault(m.q, {})
        row[m.z] = row.get(m.z, 0) + m.coefficient()

    def add_term(r: int):
        num = p ** (r * (r - 1) // 2) * z ** r
        if r % 2:
            num = -num
        w = p ** (r - 1) * xz
        c = w.q
        if c == 0:
            if w.is_one():
                raise DegenerateSpecializationError(f"pole at r={r} in m({x}, {z}; {p})")
            if num.q <= order:
                inv = binomial_inverse(w.coefficient(), w.z)
                rational.setdefault(num.q, []).append(inv.scale(num.coefficient()).shift(num.z))
            return
        if c > 0:
            term = num
            while term.q <= order:
                add_mono(term)
                term = term * w
            return
        winv = w.inverse()
        term = -(num * winv)
        while term.q <= order:
            add_mono(term)
            term = term * winv

    start = round(0.5 - z.q / b)
    r = start
    while True:
        if floor(r) <= order:
            add_term(r)
        elif b * (r - 1) + z.q >= 0:
            break
        r += 1
    r = start - 1
    while True:
        if floor(r) <= order:
            add_term(r)
        elif b * (r - 1) + z.q <= 0:
            break
        r -= 1

    terms: Dict[int, RatFunc] = {}
    for e, row in monos.items():
        terms[e] = RatFunc.poly(LaurentPoly.from_terms(row))
    for e, parts in rational.items():
        acc = terms.get(e, RF_ZERO)
        for part in parts:
            acc = acc + part
        terms[e] = acc
    if not terms:
        return Series.zero(order)
    return Series.from_terms(terms, order)


def appell_m(spec: AppellSpec, order: int) -> Series:
    """m(x, z; p) = Theta(z; p)^-1 * sum_r (-1)^r p^C(r,2) z^r / (1 - p^(r-1) x z)."""
    reason = appell_degenerate(spec)
    if reason:
        raise DegenerateSpecializationError(reason)
    return expand_product(
        order, 1, ONE_MONO, [], theta_factors(ThetaSpec(spec.z, spec.base)),
        seed_fn=lambda n: _appell_numerator_sum(spec, n),
    )


# D_n and its splitting --------------------------------------------------------

def d_n_terms(n: int, x: Monomial, z: Monomial, zp: Monomial, p: Monomial) -> List[Tuple[Monomial, AppellSpec]]:
    """(coefficient, Appell spec) pairs whose sum is D_n(x, z, z'; p)."""
    if n < 2:
        raise ValueError("D_n needs n >= 2")
    terms = [(ONE_MONO, AppellSpec(x, z, p))]
    neg_x = -x
    base = p ** (n * n)
    for r in range(n):
        coeff = -(p ** (-comb(r + 1, 2)) * neg_x ** r)
        arg = -(p ** (comb(n, 2) - n * r) * neg_x ** n)
        terms.append((coeff, AppellSpec(arg, zp, base)))
    return terms


def d_n(n: int, x: Monomial, z: Monomial, zp: Monomial, p: Monomial, order: int) -> Series:
    total = None
    for coeff, spec in d_n_terms(n, x, z, zp, p):
        part = appell_m(spec, order - coeff.q).mul_monomial(coeff)
        total = part if total is None else total + part
    return total.truncate(order)


def splitting_terms(n: int, x: Monomial, z: Monomial, zp: Monomial, p: Monomial):
    """Per-r (prefactor, numerator thetas, denominator thetas) of the theta-quotient split."""
    neg_x = -x
    pn = p ** n
    pn2 = p ** (n * n)
    eta_n = ThetaSpec(pn, p ** (3 * n))
    common_den = [
        ThetaSpec(x * z, p),
        ThetaSpec(zp, pn2),
        ThetaSpec(-(p ** comb(n, 2) * neg_x ** n * zp), pn),
    ]
    out = []
    for r in range(n):
        prefactor = zp * p ** comb(r, 2) * (-(x * z)) ** r
        numer = [
            eta_n, eta_n, eta_n,
            ThetaSpec(-(p ** (comb(n, 2) + r) * neg_x ** n * z * zp), pn),
            ThetaSpec(p ** (n * r) * z ** n / zp, pn2),
        ]
        denom = common_den + [ThetaSpec(p ** r * z, pn)]
        out.append((prefactor, numer, denom))
    return out


def theta_quotient(order: int, scalar: Scalar, prefactor: Monomial,
                   numer: Sequence[ThetaSpec], denom: Sequence[ThetaSpec]) -> Series:
    """scalar * prefactor * prod(numer) / prod(denom)."""
    den_factors = [f for spec in denom for f in theta_factors(spec)]
    return expand_product(order, scalar, prefactor, [], den_factors,
                          [ThetaSeries(spec) for spec in numer])


def splitting_rhs(n: int, x: Monomial, z: Monomial, zp: Monomial, p: Monomial, order: int) -> Series:
    total = None
    for prefactor, numer, denom in splitting_terms(n, x, z, zp, p):
        part = theta_quotient(order, 1, prefactor, numer, denom)
        total = part if total is None else total + part
    return total


# Universal g ----------------------------------------------------------------

def g_degenerate(x: Monomial, p: Monomial) -> Optional[str]:
    if PochFactor(x, p).is_zero() or PochFactor(p / x, p).is_zero():
        return f"g({x}; {p}) has a vanishing Pochhammer factor"
    return None


def universal_g(x: Monomial, p: Monomial, order: int) -> Series:
    """g(x; p) = x^-1 (-1 + sum_n p^(n^2) / ((x; p)_(n+1) (p/x; p)_n))."""
    reason = g_degenerate(x, p)
    if reason:
        raise DegenerateSpecializationError(reason)
    inner = order + x.q
    b = p.q
    total = -Series.one(inner)
    n = 0
    while b * n * n <= inner:
        part = expand_product(inner, 1, p ** (n * n), [],
                              [PochFactor(x, p, n + 1), PochFactor(p / x, p, n)])
        total = total + part
        n += 1
    return total.mul_monomial(x.inverse()).truncate(order)


# Eulerian mock theta series ---------------------------------------------------

def _fin(sign: int, a: int, b: int, count: int) -> PochFactor:
    return PochFactor(_q(a, sign), _q(b), count)


# name -> n -> (sign, q-exponent, numerator factors, denominator factors)
EULERIAN_SUMMANDS: Dict[EulerianName, Callable[[int], tuple]] = {
    EulerianName.PHI10: lambda n: (1, comb(n + 1, 2), [], [_fin(1, 1, 2, n + 1)]),
    EulerianName.PSI10: lambda n: (1, comb(n + 2, 2), [], [_fin(1, 1, 2, n + 1)]),
    EulerianName.X10: lambda n: ((-1) ** n, n * n, [], [_fin(-1, 1, 1, 2 * n)]),
    EulerianName.CHI10: lambda n: ((-1) ** n, (n + 1) ** 2, [], [_fin(-1, 1, 1, 2 * n + 1)]),
    EulerianName.PHI6: lambda n: ((-1) ** n, n * n, [_fin(1, 1, 2, n)], [_fin(-1, 1, 1, 2 * n)]),
    EulerianName.PSI6: lambda n: ((-1) ** n, (n + 1) ** 2, [_fin(1, 1, 2, n)], [_fin(-1, 1, 1, 2 * n + 1)]),
    EulerianName.F0: lambda n: (1, n * n, [], [_fin(-1, 1, 1, n)]),
    EulerianName.F1: lambda n: (1, n * (n + 1), [], [_fin(-1, 1, 1, n)]),
    EulerianName.F0_7TH: lambda n: (1, n * n, [], [_fin(1, n + 1, 1, n)]),
}


def eulerian_base(name: EulerianName, order: int) -> Series:
    """The named series in plain q through q^order."""
    summand = EULERIAN_SUMMANDS[name]
    total = Series.zero(order)
    n = 0
    while True:
        sign, e, numer, denom = summand(n)
        if e > order:
            break
        total = total + expand_product(order, sign, _q(e), numer, denom)
        n += 1
    return total


def split_argument(arg: Monomial) -> Tuple[int, int, int]:
    """arg = sign * w^t * q^s  ->  (sign, t, s)."""
    if arg.z != 0:
        raise ValueError(f"Eulerian series take pure q arguments, got {arg}")
    if arg.q < 1:
        raise ValueError(f"Eulerian argument needs a positive q power, got {arg}")
    if arg.turn == 0:
        return arg.sign, 0, arg.q
    if arg.turn * 3 == 1:
        return arg.sign, 1, arg.q
    if arg.turn * 6 == 1:
        # 1 + w = -w^2
        return -arg.sign, 2, arg.q
    raise ValueError(f"unsupported phase in {arg}")


def eulerian(name: EulerianName, twist: int, arg: Monomial, order: int) -> Series:
    """name(w^twist * arg) through q^order."""
    if name is EulerianName.G_UNIVERSAL:
        return universal_g(arg, Q_MONO, order)
    sign, t, s = split_argument(arg)
    t = (t + twist) % 3
    base = eulerian_base(name, order // s)
    return base.twist(t).substitute(sign, s).truncate(order)
