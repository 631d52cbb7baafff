# Author: Ozy
"""
Identity verification

Runs catalog records through the exact Series engine and the numeric engine
and folds the per-specialization results into one outcome per (record, engine).
"""

import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from catalog import IdentityRecord
from errors import (
    DegenerateSpecializationError,
    NearPoleError,
    NonConvergenceError,
    NonUnitSeriesError,
    QSeriesError,
    UnsupportedFieldError,
)
from exact_arith import canon, is_rational
from expr_parser import Expr, Primitive, PrimitiveKind, SymMono, Term
from numeric_engine import point_rng, residuals_at_points
from qring import Monomial, PochFactor, Series, expand_product
from special_functions import (
    AppellSpec,
    EulerianName,
    ThetaSeries,
    ThetaSpec,
    appell_degenerate,
    appell_m,
    d_n,
    d_n_terms,
    eulerian,
    g_degenerate,
    theta_factors,
    theta_is_zero,
    splitting_rhs,
    splitting_terms,
    universal_g,
)

logger = logging.getLogger(__name__)

OMEGA_TAG = "omega-combination"


class Engine(Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


class VerificationStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED_DEGENERATE = "skipped-degenerate"
    NOT_APPLICABLE = "not-applicable"


@dataclass
class VerificationOutcome:
    id: str
    engine: Engine
    status: VerificationStatus
    order: Optional[int] = None
    points: Optional[int] = None
    max_residual: float = 0.0
    elapsed_ms: float = 0.0
    details: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        out = {
            'id': self.id,
            'engine': self.engine.value,
            'status': self.status.value,
            'order': self.order,
            'points': self.points,
            'max_residual': self.max_residual,
            'details': self.details,
        }
        if timings:
            out['elapsed_ms'] = round(self.elapsed_ms, 3)
        return out


def fold_status(statuses: Sequence[VerificationStatus]) -> VerificationStatus:
    """Any fail fails; otherwise one pass suffices; otherwise degenerate beats not-applicable."""
    if VerificationStatus.FAIL in statuses:
        return VerificationStatus.FAIL
    if VerificationStatus.PASS in statuses:
        return VerificationStatus.PASS
    if VerificationStatus.SKIPPED_DEGENERATE in statuses:
        return VerificationStatus.SKIPPED_DEGENERATE
    return VerificationStatus.NOT_APPLICABLE


# Exact expansion ------------------------------------------------------------

def _specialize(prim: Primitive, assignment: Dict[str, Monomial], scale: int) -> List[Monomial]:
    return [a.specialize(assignment, scale) for a in prim.args]


def _series_primitive(prim: Primitive, args: List[Monomial], order: int) -> Series:
    kind = prim.kind
    if kind is PrimitiveKind.APPELL:
        return appell_m(AppellSpec(*args), order)
    if kind is PrimitiveKind.DN:
        return d_n(prim.n, *args, order)
    if kind is PrimitiveKind.SPLIT:
        return splitting_rhs(prim.n, *args, order)
    if kind is PrimitiveKind.G:
        return universal_g(args[0], args[1], order)
    if kind is PrimitiveKind.EULERIAN:
        return eulerian(EulerianName(prim.name), 0, args[0], order)
    raise ValueError(f"{kind.value} has a product form")


def _power(s: Series, e: int) -> Series:
    out = s
    for _ in range(abs(e) - 1):
        out = out.mul(s)
    if e < 0:
        out = out.invert()
    return out


def expand_term(term: Term, assignment: Dict[str, Monomial], order: int, scale: int = 1) -> Series:
    """One term as a Series exact through q^order."""
    prefactor = term.mono.specialize(assignment, scale)
    numer: List[PochFactor] = []
    denom: List[PochFactor] = []
    sparse: List[ThetaSeries] = []
    series_factors: List[Tuple[Primitive, List[Monomial], int]] = []
    for prim, e in term.factors:
        args = _specialize(prim, assignment, scale)
        if prim.is_series_type():
            series_factors.append((prim, args, e))
        elif prim.kind is PrimitiveKind.THETA:
            spec = ThetaSpec(args[0], args[1])
            if e > 0:
                sparse.extend([ThetaSeries(spec)] * e)
            else:
                denom.extend(theta_factors(spec) * -e)
        else:
            factor = PochFactor(args[0], args[1])
            (numer if e > 0 else denom).extend([factor] * abs(e))

    if not series_factors:
        return expand_product(order, term.scalar, prefactor, numer, denom, sparse)

    # a lower bound on the q-valuation of the product part
    shift = (prefactor.q + sum(f.valuation() for f in numer)
             - sum(f.valuation() for f in denom) + sum(f.valuation() for f in sparse))
    bounds = [0] * len(series_factors)
    parts: List[Series] = []
    for _ in range(4):
        parts = []
        for i, (prim, args, e) in enumerate(series_factors):
            others = shift + sum(b for j, b in enumerate(bounds) if j != i)
            base = _series_primitive(prim, args, order - others)
            parts.append(_power(base, e))
        lows = [p.min_exp for p in parts]
        if all(lo >= b for lo, b in zip(lows, bounds)):
            break
        bounds = [min(lo, b) for lo, b in zip(lows, bounds)]
    out = expand_product(order - sum(p.min_exp for p in parts), term.scalar, prefactor, numer, denom, sparse)
    for p in parts:
        out = out.mul(p)
    return out.truncate(order)


def expand_expr(expr: Expr, assignment: Dict[str, Monomial], order: int, scale: int = 1) -> Series:
    """Exact Series of a sum of terms under the assignment."""
    total = Series.zero(order)
    for term in expr.terms:
        total = total + expand_term(term, assignment, order, scale)
    if total.order < order:
        logger.debug("expansion reached q^%d of the requested q^%d", total.order, order)
    return total


def degeneracy_check(expr: Expr, assignment: Dict[str, Monomial], scale: int = 1) -> Optional[str]:
    """Reason the specialization makes some denominator vanish identically, or None."""
    for term in expr.terms:
        for prim, e in term.factors:
            args = _specialize(prim, assignment, scale)
            kind = prim.kind
            if kind is PrimitiveKind.THETA:
                if e < 0 and theta_is_zero(ThetaSpec(args[0], args[1])):
                    return f"Theta({args[0]}; {args[1]}) vanishes in a denominator"
            elif kind is PrimitiveKind.POCH:
                if e < 0 and PochFactor(args[0], args[1]).is_zero():
                    return f"({args[0]}; {args[1]})_inf vanishes in a denominator"
            elif kind is PrimitiveKind.APPELL:
                reason = appell_degenerate(AppellSpec(*args))
                if reason:
                    return reason
            elif kind is PrimitiveKind.DN:
                for _, spec in d_n_terms(prim.n, *args):
                    reason = appell_degenerate(spec)
                    if reason:
                        return reason
            elif kind is PrimitiveKind.SPLIT:
                for _, _, den in splitting_terms(prim.n, *args):
                    for spec in den:
                        if theta_is_zero(spec):
                            return f"Theta({spec.arg}; {spec.base}) vanishes in the splitting denominator"
            elif kind is PrimitiveKind.G:
                reason = g_degenerate(args[0], args[1])
                if reason:
                    return reason
    return None


def _is_omega_term(term: Term) -> bool:
    if not is_rational(term.scalar) or term.mono.turn:
        return True
    return any(a.turn for prim, _ in term.factors for a in prim.args)


def omega_combination_rational(expr: Expr, assignment: Dict[str, Monomial], order: int, scale: int = 1) -> bool:
    """Whether the terms carrying a cube root of unity sum to a series over Q."""
    omega_terms = tuple(t for t in expr.terms if _is_omega_term(t))
    if not omega_terms:
        return True
    combo = expand_expr(Expr(omega_terms), assignment, order, scale)
    for _, c in combo.items():
        if not c.is_constant() or not is_rational(canon(c.constant_value())):
            return False
    return True


def verify_exact(record: IdentityRecord, order: int) -> VerificationOutcome:
    """Expand LHS - RHS for every suite entry and sub-identity; pass iff all residuals vanish."""
    started = time.perf_counter()
    outcome = VerificationOutcome(record.id, Engine.EXACT, VerificationStatus.NOT_APPLICABLE, order=order)
    if not record.runs_exact():
        outcome.details.append({'reason': "record is numeric-only"})
        return outcome
    statuses: List[VerificationStatus] = []
    check_rational = OMEGA_TAG in record.tags
    for k, entry in enumerate(record.spec_suite):
        assignment = record.assignment(entry)
        for i, expr in enumerate(record.sub_identities()):
            detail: Dict[str, Any] = {'entry': k, 'sub': i, 'bindings': dict(entry)}
            status = _exact_one(record, expr, assignment, order, detail, check_rational)
            detail['status'] = status.value
            statuses.append(status)
            outcome.details.append(detail)
    outcome.status = fold_status(statuses)
    outcome.max_residual = 1.0 if outcome.status is VerificationStatus.FAIL else 0.0
    outcome.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return outcome


def _exact_one(record: IdentityRecord, expr: Expr, assignment: Dict[str, Monomial], order: int,
               detail: Dict[str, Any], check_rational: bool) -> VerificationStatus:
    reason = degeneracy_check(expr, assignment, record.scale)
    if reason:
        detail['reason'] = reason
        return VerificationStatus.SKIPPED_DEGENERATE
    try:
        residual = expand_expr(expr, assignment, order, record.scale)
        if check_rational and not omega_combination_rational(expr, assignment, order, record.scale):
            detail['reason'] = "omega combination has irrational coefficients"
            return VerificationStatus.FAIL
    except UnsupportedFieldError as exc:
        detail['reason'] = str(exc)
        return VerificationStatus.NOT_APPLICABLE
    except (DegenerateSpecializationError, NonUnitSeriesError) as exc:
        detail['reason'] = str(exc)
        return VerificationStatus.SKIPPED_DEGENERATE
    except QSeriesError as exc:
        logger.debug("%s: exact expansion failed", record.id, exc_info=True)
        detail['reason'] = f"{type(exc).__name__}: {exc}"
        return VerificationStatus.FAIL
    detail['checked_through'] = residual.order
    first = residual.valuation()
    if first is not None:
        detail['first_nonzero'] = first
        detail['coefficient'] = str(residual.coeff(first))
        return VerificationStatus.FAIL
    if residual.order < order:
        detail['reason'] = f"precision lost: exact only through q^{residual.order}"
        return VerificationStatus.FAIL
    return VerificationStatus.PASS


def verify_numeric(record: IdentityRecord, points: int, tol: float, seed: int) -> VerificationOutcome:
    """Evaluate LHS - RHS at `points` seeded complex points; pass iff every relative residual < tol."""
    started = time.perf_counter()
    outcome = VerificationOutcome(record.id, Engine.NUMERIC, VerificationStatus.NOT_APPLICABLE, points=points)
    if not record.runs_numeric():
        outcome.details.append({'reason': "record is exact-only"})
        return outcome
    exprs = list(record.sub_identities())
    symbols = set()
    for e in exprs:
        symbols |= e.symbols()
    try:
        worst, details = residuals_at_points(exprs, symbols, points, point_rng(seed, record.id))
    except NearPoleError as exc:
        outcome.status = VerificationStatus.SKIPPED_DEGENERATE
        outcome.details.append({'reason': str(exc)})
    except (NonConvergenceError, QSeriesError, ZeroDivisionError) as exc:
        outcome.status = VerificationStatus.FAIL
        outcome.max_residual = 1.0
        outcome.details.append({'reason': f"{type(exc).__name__}: {exc}"})
    else:
        outcome.details = details
        outcome.max_residual = float(f"{max(worst, default=0.0):.3e}")
        outcome.status = VerificationStatus.PASS if all(r < tol for r in worst) else VerificationStatus.FAIL
    outcome.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return outcome


# Mutations ------------------------------------------------------------------

MUTATION_KINDS = ("sign", "exponent", "scalar")


def mutate_expr(expr: Expr, kind: str) -> Expr:
    """Corrupt the first term: flip its sign, bump its q-exponent, or double its scalar."""
    if not expr.terms:
        raise ValueError("cannot mutate an empty expression")
    first = expr.terms[0]
    if kind == "sign":
        first = first.negated()
    elif kind == "exponent":
        m = first.mono
        first = replace(first, mono=SymMono(m.sign, m.turn, m.q + 1, m.powers))
    elif kind == "scalar":
        first = replace(first, scalar=canon(first.scalar * 2))
    else:
        raise ValueError(f"unknown mutation kind: {kind}")
    return Expr((first,) + expr.terms[1:])


def mutate_records(records: Sequence[IdentityRecord], count: int, seed: int) -> List[IdentityRecord]:
    """`count` deterministic mutants of records that both engines cover."""
    pool = [r for r in records if r.engines == "both"]
    if not pool:
        return []
    rng = random.Random(seed)
    chosen = rng.sample(pool, min(count, len(pool)))
    out = []
    for i, record in enumerate(sorted(chosen, key=lambda r: r.id)):
        kind = MUTATION_KINDS[i % len(MUTATION_KINDS)]
        out.append(replace(record, id=f"{record.id}~{kind}", expr=mutate_expr(record.expr, kind)))
    return out


# Scheduling -----------------------------------------------------------------

@dataclass(frozen=True)
class RunPlan:
    order: int = 40
    engine: str = "both"
    points: int = 5
    tol: float = 1e-8
    seed: int = 0
    jobs: int = 1

    def engines(self) -> List[Engine]:
        if self.engine == "both":
            return [Engine.EXACT, Engine.NUMERIC]
        return [Engine(self.engine)]


def run_one(record: IdentityRecord, engine: Engine, plan: RunPlan) -> VerificationOutcome:
    logger.debug("verifying %s with the %s engine", record.id, engine.value)
    if engine is Engine.EXACT:
        return verify_exact(record, plan.order)
    return verify_numeric(record, plan.points, plan.tol, plan.seed)


def _run_task(task: Tuple[IdentityRecord, Engine, RunPlan]) -> VerificationOutcome:
    return run_one(*task)


def run_records(records: Sequence[IdentityRecord], plan: RunPlan) -> List[VerificationOutcome]:
    """Outcomes for every (record, engine), ordered by record then engine whatever the job count."""
    tasks = [(r, e, plan) for r in records for e in plan.engines()]
    if plan.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
            outcomes = list(pool.map(_run_task, tasks))
    else:
        outcomes = [_run_task(t) for t in tasks]
    position = {r.id: i for i, r in enumerate(records)}
    return sorted(outcomes, key=lambda o: (position[o.id], o.engine.value))


def summarize(outcomes: Sequence[VerificationOutcome]) -> Dict[str, int]:
    counts = {s.value: 0 for s in VerificationStatus}
    for o in outcomes:
        counts[o.status.value] += 1
    counts['total'] = len(outcomes)
    return counts
