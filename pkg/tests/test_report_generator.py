import json

import jsonschema
import pytest

from config_manager import ConfigManager
from errors import ConfigError
from report_generator import ReportGenerator, validate_report
from verifier import Engine, VerificationOutcome, VerificationStatus


def make_outcomes():
    return [
        VerificationOutcome("N3-1", Engine.EXACT, VerificationStatus.PASS, order=40, elapsed_ms=12.5,
                            details=[{'entry': 0, 'sub': 0, 'status': 'pass', 'checked_through': 40}]),
        VerificationOutcome("N3-1", Engine.NUMERIC, VerificationStatus.PASS, points=5, max_residual=3.1e-25,
                            elapsed_ms=40.0, details=[{'point': '0', 'residual': '3.100e-25'}]),
        VerificationOutcome("TENTH-1", Engine.EXACT, VerificationStatus.FAIL, order=40, max_residual=1.0,
                            details=[{'entry': 0, 'sub': 0, 'first_nonzero': 3, 'coefficient': '2'}]),
    ]


def header():
    return ConfigManager().as_header()


def test_json_report():
    text = ReportGenerator(make_outcomes(), header()).generate('json')
    doc = json.loads(text)
    assert doc['tool'] == 'qverify'
    assert [o['id'] for o in doc['outcomes']] == ["N3-1", "N3-1", "TENTH-1"]
    assert doc['summary'] == {'pass': 2, 'fail': 1, 'skipped-degenerate': 0, 'not-applicable': 0, 'total': 3}
    assert all('elapsed_ms' not in o for o in doc['outcomes'])
    assert text.endswith("\n")


def test_json_report_is_byte_stable():
    a = ReportGenerator(make_outcomes(), header()).generate('json')
    b = ReportGenerator(make_outcomes(), header()).generate('json')
    assert a == b


def test_timings_are_opt_in():
    doc = json.loads(ReportGenerator(make_outcomes(), header(), timings=True).generate('json'))
    assert doc['outcomes'][0]['elapsed_ms'] == 12.5


def test_markdown_report():
    text = ReportGenerator(make_outcomes(), header()).generate('markdown')
    rows = [line for line in text.splitlines() if line.startswith("| ") and "---" not in line]
    assert len(rows) == 4
    assert "| TENTH-1 | exact | fail | 1.000e+00 |" in rows
    assert "time (ms)" not in text
    assert "time (ms)" in ReportGenerator(make_outcomes(), header(), timings=True).generate('markdown')


def test_empty_report():
    doc = json.loads(ReportGenerator([], header()).generate('json'))
    assert doc['outcomes'] == []
    assert doc['summary']['total'] == 0


def test_unknown_format():
    with pytest.raises(ConfigError):
        ReportGenerator([], header()).generate('pdf')


def test_save(tmp_path):
    path = tmp_path / "report.md"
    ReportGenerator(make_outcomes(), header()).save(str(path), 'markdown')
    assert path.read_text(encoding='utf-8').startswith("# qverify")
    with pytest.raises(ConfigError):
        ReportGenerator([], header()).save(str(tmp_path / "missing" / "report.json"))


def test_schema_rejects_bad_status():
    doc = ReportGenerator(make_outcomes(), header()).document()
    doc['outcomes'][0]['status'] = 'maybe'
    with pytest.raises(jsonschema.ValidationError):
        validate_report(doc)
