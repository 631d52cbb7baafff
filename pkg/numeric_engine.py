# Author: Ozy
"""
Floating evaluation of identity expressions at complex sample points.

Nothing here touches the Series engine: theta functions come from mpmath's
q-Pochhammer products, Appell functions and g from their defining sums, the
Eulerian series from their summands. Agreement between the two engines is
therefore evidence, not an echo.
"""

import hashlib
import logging
import random
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterable, List, Tuple

import mpmath
from mpmath import mpc, mpf

from errors import NearPoleError, NonConvergenceError
from exact_arith import CycloRational, Scalar
from expr_parser import Expr, Primitive, PrimitiveKind, SymMono, Term

logger = logging.getLogger(__name__)

WORK_DPS = 30
DENOM_GUARD = 1e-6
TAIL_EPS = mpf('1e-17')
ITERATION_CAP = 2000
MAX_RESAMPLES = 20
Q_RADIUS = (0.15, 0.4)
VAR_RADIUS = (0.8, 1.25)


def point_rng(seed: int, record_id: str) -> random.Random:
    """Per-record stream so the sampled points never depend on scheduling."""
    digest = hashlib.sha256(f"{seed}:{record_id}".encode('utf-8')).hexdigest()
    return random.Random(int(digest[:16], 16))


def _polar(rng: random.Random, radius: Tuple[float, float]) -> mpc:
    r = rng.uniform(*radius)
    theta = rng.uniform(0.0, 2.0 * float(mpmath.pi))
    return mpmath.mpc(r * mpmath.cos(theta), r * mpmath.sin(theta))


def sample_point(rng: random.Random, symbols: Iterable[str]) -> Tuple[mpc, Dict[str, mpc]]:
    """(q, {symbol: value}) with every free symbol drawn independently."""
    q = _polar(rng, Q_RADIUS)
    values = {name: _polar(rng, VAR_RADIUS) for name in sorted(symbols)}
    return q, values


def scalar_value(s: Scalar) -> mpc:
    if isinstance(s, CycloRational):
        omega = mpmath.expjpi(mpf(2) / 3)
        return _ratio(s.re) + _ratio(s.wc) * omega
    return mpc(_ratio(s))


def _ratio(x) -> mpf:
    x = Fraction(x)
    return mpf(x.numerator) / x.denominator


def _guard(value, what: str):
    if abs(value) < DENOM_GUARD:
        raise NearPoleError(f"{what} is {mpmath.nstr(abs(value), 3)} at the sample point", float(abs(value)))
    return value


def _bilateral(term_fn: Callable[[int], mpc], what: str) -> mpc:
    """Sum term_fn(r) over all integers r, stopping each tail once terms fall below the running scale."""
    total = mpc(0)
    scale = mpf(0)
    for step, start in ((1, 0), (-1, -1)):
        r = start
        small = 0
        for _ in range(ITERATION_CAP):
            t = term_fn(r)
            total += t
            scale = max(scale, abs(t))
            if abs(t) <= TAIL_EPS * scale and abs(r) > 2:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            r += step
        else:
            raise NonConvergenceError(f"{what}: tail bound not met within {ITERATION_CAP} terms")
    return total


def _unilateral(term_fn: Callable[[int], mpc], what: str) -> mpc:
    total = mpc(0)
    scale = mpf(0)
    small = 0
    for n in range(ITERATION_CAP):
        t = term_fn(n)
        total += t
        scale = max(scale, abs(t))
        if abs(t) <= TAIL_EPS * scale and n > 2:
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergenceError(f"{what}: tail bound not met within {ITERATION_CAP} terms")


# Primitives -----------------------------------------------------------------

def theta(x: mpc, p: mpc) -> mpc:
    """Theta(x; p) = (x)_inf (p/x)_inf (p)_inf."""
    return mpmath.qp(x, p) * mpmath.qp(p / x, p) * mpmath.qp(p, p)


def poch(a: mpc, p: mpc, n=None) -> mpc:
    if n is None:
        return mpmath.qp(a, p)
    return mpmath.qp(a, p, n)


def appell(x: mpc, z: mpc, p: mpc) -> mpc:
    """m(x, z; p) from its bilateral definition."""
    denom = _guard(theta(z, p), "Theta(z; p) in an Appell function")

    def term(r: int) -> mpc:
        pole = _guard(1 - p ** (r - 1) * x * z, f"Appell denominator at r={r}")
        return (-1) ** (r % 2) * p ** comb_signed(r) * z ** r / pole

    return _bilateral(term, "Appell sum") / denom


def comb_signed(r: int) -> int:
    """r(r-1)/2 for any integer r."""
    return r * (r - 1) // 2


def d_n(n: int, x: mpc, z: mpc, zp: mpc, p: mpc) -> mpc:
    total = appell(x, z, p)
    base = p ** (n * n)
    for r in range(n):
        coeff = p ** (-comb(r + 1, 2)) * (-x) ** r
        total -= coeff * appell(-(p ** comb(n, 2)) * p ** (-n * r) * (-x) ** n, zp, base)
    return total


def split_rhs(n: int, x: mpc, z: mpc, zp: mpc, p: mpc) -> mpc:
    """The n-term theta-quotient side of the splitting of D_n."""
    pn = p ** n
    pn2 = p ** (n * n)
    tail = -(p ** comb(n, 2)) * (-x) ** n
    eta3 = mpmath.qp(pn, pn) ** 3
    common = theta(x * z, p) * theta(zp, pn2) * theta(tail * zp, pn)
    total = mpc(0)
    for r in range(n):
        den = _guard(common * theta(p ** r * z, pn), f"splitting denominator at r={r}")
        num = eta3 * theta(tail * p ** r * z * zp, pn) * theta(p ** (n * r) * z ** n / zp, pn2)
        total += zp * p ** comb(r, 2) * (-x * z) ** r * num / den
    return total


def universal_g(x: mpc, p: mpc) -> mpc:
    def term(n: int) -> mpc:
        den = _guard(poch(x, p, n + 1) * poch(p / x, p, n), f"g denominator at n={n}")
        return p ** (n * n) / den

    return (_unilateral(term, "universal g") - 1) / x


def _eulerian_terms(name: str, q: mpc) -> Callable[[int], mpc]:
    q2 = q * q

    def fin(a, b, n):
        return poch(a, b, n)

    table = {
        "phi10": lambda n: q ** comb(n + 1, 2) / fin(q, q2, n + 1),
        "psi10": lambda n: q ** comb(n + 2, 2) / fin(q, q2, n + 1),
        "X10": lambda n: (-1) ** n * q ** (n * n) / fin(-q, q, 2 * n),
        "chi10": lambda n: (-1) ** n * q ** ((n + 1) ** 2) / fin(-q, q, 2 * n + 1),
        "phi6": lambda n: (-1) ** n * q ** (n * n) * fin(q, q2, n) / fin(-q, q, 2 * n),
        "psi6": lambda n: (-1) ** n * q ** ((n + 1) ** 2) * fin(q, q2, n) / fin(-q, q, 2 * n + 1),
        "f0": lambda n: q ** (n * n) / fin(-q, q, n),
        "f1": lambda n: q ** (n * (n + 1)) / fin(-q, q, n),
        "F0": lambda n: q ** (n * n) / fin(q ** (n + 1), q, n),
    }
    if name not in table:
        raise KeyError(f"unknown Eulerian series {name!r}")
    return table[name]


def eulerian(name: str, arg: mpc) -> mpc:
    return _unilateral(_eulerian_terms(name, arg), name)


# Expressions ----------------------------------------------------------------

class NumericEvaluator:
    """Evaluates Expr trees at one point (q, symbol values)."""

    def __init__(self, q: mpc, values: Dict[str, mpc]):
        self.q = q
        self.values = values

    def monomial(self, mono: SymMono) -> mpc:
        out = mono.sign * mpmath.expjpi(2 * mpf(mono.turn.numerator) / mono.turn.denominator)
        out *= self.q ** mono.q
        for name, e in mono.powers:
            out *= self.values[name] ** e
        return out

    def primitive(self, prim: Primitive) -> mpc:
        a = [self.monomial(m) for m in prim.args]
        kind = prim.kind
        if kind is PrimitiveKind.THETA:
            return theta(a[0], a[1])
        if kind is PrimitiveKind.POCH:
            return poch(a[0], a[1])
        if kind is PrimitiveKind.APPELL:
            return appell(a[0], a[1], a[2])
        if kind is PrimitiveKind.DN:
            return d_n(prim.n, a[0], a[1], a[2], a[3])
        if kind is PrimitiveKind.SPLIT:
            return split_rhs(prim.n, a[0], a[1], a[2], a[3])
        if kind is PrimitiveKind.G:
            return universal_g(a[0], a[1])
        return eulerian(prim.name, a[0])

    def term(self, term: Term) -> mpc:
        value = scalar_value(term.scalar) * self.monomial(term.mono)
        for prim, e in term.factors:
            v = self.primitive(prim)
            if e < 0:
                _guard(v, f"denominator {prim}")
            value *= v ** e
        return value

    def evaluate(self, expr: Expr) -> Tuple[mpc, mpf]:
        """(sum of terms, largest term magnitude)."""
        total = mpc(0)
        scale = mpf(0)
        for t in expr.terms:
            v = self.term(t)
            total += v
            scale = max(scale, abs(v))
        return total, scale


def relative_residual(expr: Expr, q: mpc, values: Dict[str, mpc]) -> float:
    """|LHS - RHS| measured against the largest individual term."""
    with mpmath.workdps(WORK_DPS):
        total, scale = NumericEvaluator(q, values).evaluate(expr)
        if scale == 0:
            return 0.0
        return float(abs(total) / scale)


def residuals_at_points(exprs: List[Expr], symbols: Iterable[str], points: int,
                        rng: random.Random) -> Tuple[List[float], List[Dict[str, str]]]:
    """Worst residual over the sub-identities at each of `points` samples, resampling near poles."""
    symbols = sorted(symbols)
    worst: List[float] = []
    details: List[Dict[str, str]] = []
    for k in range(points):
        for attempt in range(MAX_RESAMPLES + 1):
            with mpmath.workdps(WORK_DPS):
                q, values = sample_point(rng, symbols)
            try:
                res = max(relative_residual(e, q, values) for e in exprs)
            except NearPoleError as exc:
                logger.debug("point %d attempt %d resampled: %s", k, attempt, exc)
                continue
            worst.append(res)
            details.append({
                'point': str(k),
                'q': mpmath.nstr(q, 8),
                'residual': f"{res:.3e}",
                'resamples': str(attempt),
            })
            break
        else:
            raise NearPoleError(f"no admissible sample point after {MAX_RESAMPLES} resamples")
    return worst, details
