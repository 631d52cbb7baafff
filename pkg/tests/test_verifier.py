from dataclasses import replace

import pytest

from catalog import lookup
from expr_parser import parse_identity
from qring import ONE_MONO, Monomial
from verifier import (
    Engine,
    RunPlan,
    VerificationStatus,
    degeneracy_check,
    expand_expr,
    fold_status,
    mutate_expr,
    mutate_records,
    omega_combination_rational,
    run_records,
    summarize,
    verify_exact,
    verify_numeric,
)

P = VerificationStatus.PASS
F = VerificationStatus.FAIL
S = VerificationStatus.SKIPPED_DEGENERATE
NA = VerificationStatus.NOT_APPLICABLE


def test_fold_status():
    assert fold_status([P, NA, S]) is P
    assert fold_status([P, F]) is F
    assert fold_status([S, NA]) is S
    assert fold_status([NA]) is NA
    assert fold_status([]) is NA


def test_flip_law_expands_to_zero(catalog):
    record = lookup(catalog, "JLAW-FLIP")
    residual = expand_expr(record.expr, record.assignment(()), 15)
    assert residual.is_zero()
    assert residual.order == 15


def test_degeneracy_check():
    (expr,) = parse_identity("1 / J(x; q) = 1")
    assert degeneracy_check(expr, {"x": ONE_MONO}) is not None
    assert degeneracy_check(expr, {"x": Monomial(1, 0, 1)}) is None


def test_appell_pole_is_degenerate():
    (expr,) = parse_identity("m(x, z; q) = 0")
    z = Monomial(1, 0, 1)
    assert degeneracy_check(expr, {"x": z.inverse(), "z": z}) is not None


@pytest.mark.parametrize("rid", ["PRELIM-1", "PRELIM-2", "PRELIM-7", "JLAW-FLIP", "QUINTUPLE-A"])
def test_theta_identities_pass_exactly(catalog, rid):
    outcome = verify_exact(lookup(catalog, rid), 20)
    assert outcome.status is P, outcome.details
    assert outcome.max_residual == 0.0
    assert all(d["checked_through"] == 20 for d in outcome.details)


@pytest.mark.parametrize("rid", ["SIXTH-RLN", "SIXTH-APPELL-PHI", "MTC-F0"])
def test_mock_theta_identities_pass_exactly(catalog, rid):
    assert verify_exact(lookup(catalog, rid), 15).status is P


@pytest.mark.slow
@pytest.mark.parametrize("rid", ["SIXTH-APPELL-PHI", "SIXTH-APPELL-PSI"])
def test_sixth_order_appell_forms_to_order_50(catalog, rid):
    outcome = verify_exact(lookup(catalog, rid), 50)
    assert outcome.status is P, outcome.details
    assert all(d["checked_through"] == 50 for d in outcome.details)


@pytest.mark.slow
@pytest.mark.parametrize("rid", ["TENTH-1", "TENTH-2", "TENTH-3", "TENTH-4"])
def test_tenth_order_omega_combinations_stay_rational(catalog, rid):
    record = lookup(catalog, rid)
    outcome = verify_exact(record, 40)
    assert outcome.status is P, outcome.details
    for entry in record.spec_suite:
        assignment = record.assignment(entry)
        for expr in record.sub_identities():
            assert omega_combination_rational(expr, assignment, 40, record.scale)


def test_lone_omega_term_is_not_rational():
    (expr,) = parse_identity("[0,1] T(1) = T(2)")
    assert not omega_combination_rational(expr, {}, 10)
    (expr,) = parse_identity("[1,1] T(1) + [0,-1] T(1) = T(1)")
    assert omega_combination_rational(expr, {}, 10)


@pytest.mark.slow
@pytest.mark.parametrize("rid", ["N2-SPLIT", "N3-SPLIT", "N4-SPLIT"])
def test_splitting_records_at_every_specialization(catalog, rid):
    record = lookup(catalog, rid)
    outcome = verify_exact(record, 40)
    assert outcome.status is P, outcome.details
    assert len(record.spec_suite) >= 3
    assert {d["status"] for d in outcome.details} == {"pass"}


@pytest.mark.slow
@pytest.mark.parametrize("rid", ["DN-FE-1", "DN-FE-2", "DN-FE-3", "DN-FE-4", "DN-FE-THETA"])
def test_functional_equations_to_order_40(catalog, rid):
    outcome = verify_exact(lookup(catalog, rid), 40)
    assert outcome.status is P, outcome.details
    assert {d["status"] for d in outcome.details} == {"pass"}


def test_roots_of_unity_member_outside_the_field(catalog):
    outcome = verify_exact(lookup(catalog, "JLAW-ROOTS"), 12)
    assert outcome.status is P
    assert [d["status"] for d in outcome.details] == ["pass", "pass", "not-applicable"]


def test_corrupted_identity_fails_with_first_coefficient(catalog):
    record = lookup(catalog, "JLAW-FLIP")
    broken = replace(record, expr=mutate_expr(record.expr, "scalar"))
    outcome = verify_exact(broken, 10)
    assert outcome.status is F
    assert outcome.max_residual == 1.0
    assert outcome.details[0]["first_nonzero"] == 0


def test_mutations_change_the_expression(catalog):
    expr = lookup(catalog, "PRELIM-3").expr
    for kind in ("sign", "exponent", "scalar"):
        assert mutate_expr(expr, kind) != expr
    with pytest.raises(ValueError):
        mutate_expr(expr, "swap")


def test_mutants_are_deterministic(catalog):
    a = mutate_records(catalog, 4, seed=3)
    b = mutate_records(catalog, 4, seed=3)
    assert [r.id for r in a] == [r.id for r in b]
    assert len(a) == 4
    assert all("~" in r.id and r.engines == "both" for r in a)


def test_engine_coverage(catalog):
    record = replace(lookup(catalog, "PRELIM-3"), engines="numeric")
    assert verify_exact(record, 10).status is NA
    record = replace(record, engines="exact")
    assert verify_numeric(record, 2, 1e-8, 0).status is NA


@pytest.mark.parametrize("rid", ["TENTH-5", "WEIER", "JLAW-ROOTS", "PRELIM-4"])
def test_numeric_pass(catalog, rid):
    outcome = verify_numeric(lookup(catalog, rid), 3, 1e-8, 0)
    assert outcome.status is P, outcome.details
    assert outcome.max_residual < 1e-8
    assert len(outcome.details) == 3


def test_numeric_is_reproducible(catalog):
    record = lookup(catalog, "JLAW-FLIP")
    assert verify_numeric(record, 3, 1e-8, 5).details == verify_numeric(record, 3, 1e-8, 5).details


def test_numeric_rejects_a_mutant(catalog):
    record = lookup(catalog, "PRELIM-5")
    broken = replace(record, expr=mutate_expr(record.expr, "exponent"))
    assert verify_numeric(broken, 2, 1e-8, 0).status is F


def test_run_records_orders_by_record_then_engine(catalog):
    records = [lookup(catalog, "PRELIM-3"), lookup(catalog, "PRELIM-1")]
    outcomes = run_records(records, RunPlan(order=10, points=2, jobs=1))
    assert [(o.id, o.engine) for o in outcomes] == [
        ("PRELIM-3", Engine.EXACT), ("PRELIM-3", Engine.NUMERIC),
        ("PRELIM-1", Engine.EXACT), ("PRELIM-1", Engine.NUMERIC),
    ]
    counts = summarize(outcomes)
    assert counts["pass"] == 4 and counts["total"] == 4


def test_parallel_run_matches_serial(catalog):
    records = [lookup(catalog, rid) for rid in ("PRELIM-2", "PRELIM-6", "JLAW-FLIP")]
    serial = run_records(records, RunPlan(order=10, points=2, jobs=1))
    parallel = run_records(records, RunPlan(order=10, points=2, jobs=2))
    assert [o.to_dict() for o in serial] == [o.to_dict() for o in parallel]


@pytest.mark.slow
def test_whole_catalog_numeric(catalog):
    outcomes = run_records(catalog, RunPlan(engine="numeric", points=3, jobs=2))
    assert [o.id for o in outcomes if o.status is F] == []


@pytest.mark.slow
def test_whole_catalog_exact(catalog):
    outcomes = run_records(catalog, RunPlan(engine="exact", order=12, jobs=2))
    assert [o.id for o in outcomes if o.status is F] == []


@pytest.mark.slow
def test_ten_mutants_fail_both_engines(catalog):
    mutants = mutate_records(catalog, 10, seed=0)
    assert len(mutants) == 10
    outcomes = run_records(mutants, RunPlan(order=20, engine="both", points=5, jobs=2))
    assert {o.engine for o in outcomes} == {Engine.EXACT, Engine.NUMERIC}
    assert [(o.id, o.engine.value) for o in outcomes if o.status is P] == []
