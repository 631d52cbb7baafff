import json
from collections import Counter

import pytest

from catalog import (
    FAMILY_ORDER,
    OUT_OF_SCOPE,
    filter_records,
    load_catalog,
    lookup,
    make_record,
    natural_key,
    parse,
    save_catalog,
    serialize,
)
from errors import CatalogError


def test_catalog_size_and_family_counts(catalog):
    assert len(catalog) == 77
    counts = Counter(r.family for r in catalog)
    assert counts["TENTH"] == 6
    assert counts["N2"] == 8
    assert counts["N3"] == 11
    assert counts["N4"] == 1
    assert counts["PRELIM"] == 7
    assert counts["TH8"] == 11
    assert counts["DN-FE"] == 5
    assert set(counts) <= set(FAMILY_ORDER)


def test_ids_are_unique(catalog):
    ids = [r.id for r in catalog]
    assert len(ids) == len(set(ids))


def test_every_symbol_is_declared(catalog):
    for record in catalog:
        declared = {name for name, _ in record.free_vars}
        for expr in record.sub_identities():
            assert expr.symbols() <= declared, record.id
        for entry in record.spec_suite:
            assert set(record.bound_vars()) <= {k for k, _ in entry}, record.id


def test_every_record_has_provenance(catalog):
    for record in catalog:
        section, quote = record.provenance
        assert section and quote, record.id


def test_three_term_records(catalog):
    for record in filter_records(catalog, family="N3"):
        assert len(record.sub_identities()) == 2


def test_annotated_records(catalog):
    assert lookup(catalog, "TENTH-1").field == "Q(w)"
    assert any("companion" in n for n in lookup(catalog, "N3-6").notes)
    assert lookup(catalog, "JLAW-ROOTS").field == "Q(w)"
    assert [name for name, _ in OUT_OF_SCOPE] == ["THM-SIXTH-LOST-NOTEBOOK"]


def test_lookup_and_filter_errors(catalog):
    with pytest.raises(KeyError, match="unknown identity id: NOPE"):
        lookup(catalog, "NOPE")
    with pytest.raises(ValueError):
        filter_records(catalog, family="NOPE")
    with pytest.raises(ValueError, match="unknown tag: no-such-tag"):
        filter_records(catalog, tag="no-such-tag")


def test_known_tag_outside_the_family_selects_nothing(catalog):
    assert filter_records(catalog, family="PRELIM", tag="omega-combination") == []
    assert [r.id for r in filter_records(catalog, tag="omega-combination")] == \
        ["TENTH-1", "TENTH-2", "TENTH-3", "TENTH-4"]


def test_natural_order():
    ids = ["N3-10", "N3-2", "N2-1", "N3-1"]
    assert sorted(ids, key=natural_key) == ["N2-1", "N3-1", "N3-2", "N3-10"]


def test_serialization_is_deterministic(catalog):
    text = serialize(catalog)
    assert text == serialize(list(reversed(catalog)))
    assert text.endswith("\n")
    data = json.loads(text)
    assert data["catalog_version"] == 1
    assert [r["id"] for r in data["records"]] == sorted((r.id for r in catalog), key=natural_key)


def test_parse_restores_records(catalog):
    text = serialize(catalog)
    restored = parse(text)
    assert serialize(restored) == text
    by_id = {r.id: r for r in restored}
    for record in catalog:
        assert by_id[record.id] == record


def test_save_and_load(catalog, tmp_path):
    path = tmp_path / "catalog.json"
    save_catalog(catalog[:5], str(path))
    assert [r.id for r in load_catalog(str(path))] == sorted((r.id for r in catalog[:5]), key=natural_key)


def test_load_missing_file(tmp_path):
    with pytest.raises(CatalogError, match="cannot read catalog"):
        load_catalog(str(tmp_path / "absent.json"))


def test_missing_field_names_the_record(catalog):
    data = json.loads(serialize(catalog[:3]))
    victim = data["records"][1]
    del victim["expr"]
    with pytest.raises(CatalogError) as info:
        parse(json.dumps(data))
    assert info.value.record_id == victim["id"]


def test_invalid_json_and_duplicates(catalog):
    with pytest.raises(CatalogError):
        parse("{not json")
    data = json.loads(serialize(catalog[:1]))
    data["records"].append(data["records"][0])
    with pytest.raises(CatalogError, match="duplicate id"):
        parse(json.dumps(data))


def test_make_record_checks_bindings():
    record = make_record("X-1", "JLAW", "J(x z; q) = J(q x^-1 z^-1; q)", formal="z",
                         suite=[{"x": "q"}], section="s", quote="q")
    assert record.formal_var() == "z"
    assert record.bound_vars() == ["x"]
    with pytest.raises(CatalogError):
        make_record("X-2", "JLAW", "J(x z; q) = J(q x^-1 z^-1; q)", formal="z", section="s", quote="q")
    with pytest.raises(CatalogError):
        make_record("X-3", "JLAW", "J(x z; q", formal="z", section="s", quote="q")


def test_parse_rejects_a_base_outside_q(catalog):
    doc = json.loads(serialize([lookup(catalog, "JLAW-FLIP")]))
    doc['records'][0]['expr']['terms'][0]['factors'][0]['prim']['args'][1]['q'] = 0
    with pytest.raises(CatalogError, match=r"\[JLAW-FLIP\] malformed record"):
        parse(json.dumps(doc))


def test_n2_records_keep_z_formal(catalog):
    records = filter_records(catalog, family="N2")
    assert len(records) == 8
    for record in records:
        assert record.formal_var() == "z"
    assert [len(r.spec_suite) for r in records] == [3, 3, 3, 3, 3, 1, 1, 3]
