# Author: Ozy
"""
Report generator for verification runs.
Writes a JSON document (checked against report_schema.json) or a markdown summary table.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

import jsonschema

from errors import ConfigError
from verifier import VerificationOutcome, summarize
from version import VERSION_INFO, __version__

REPORT_SCHEMA_PATH = Path(__file__).parent / "report_schema.json"


class ReportGenerator:
    """Renders a list of VerificationOutcome as json or markdown."""

    def __init__(self, outcomes: Sequence[VerificationOutcome], header: Dict[str, Any],
                 timings: bool = False):
        """
        Args:
            outcomes: Outcomes in record order
            header: Effective configuration (ConfigManager.as_header())
            timings: Include elapsed_ms; off by default so identical runs give identical bytes
        """
        self.outcomes = list(outcomes)
        self.header = header
        self.timings = timings

    def document(self) -> Dict[str, Any]:
        return {
            'tool': VERSION_INFO['name'],
            'version': __version__,
            'config': self.header,
            'outcomes': [o.to_dict(timings=self.timings) for o in self.outcomes],
            'summary': summarize(self.outcomes),
        }

    def generate(self, format_type: str = 'json') -> str:
        if format_type == 'json':
            return self._generate_json()
        if format_type == 'markdown':
            return self._generate_markdown()
        raise ConfigError(f"unknown report format: {format_type}")

    def _generate_json(self) -> str:
        doc = self.document()
        validate_report(doc)
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def _generate_markdown(self) -> str:
        eff = self.header.get('effective', {})
        lines: List[str] = [
            f"# {VERSION_INFO['name']} v{__version__} verification report",
            "",
            "Settings: " + ", ".join(f"{k}={v}" for k, v in sorted(eff.items())),
            "",
        ]
        columns = ["id", "engine", "status", "residual"]
        if self.timings:
            columns.append("time (ms)")
        lines.append("| " + " | ".join(columns) + " |")
        lines.append("|" + "---|" * len(columns))
        for o in self.outcomes:
            row = [o.id, o.engine.value, o.status.value, f"{o.max_residual:.3e}"]
            if self.timings:
                row.append(f"{o.elapsed_ms:.1f}")
            lines.append("| " + " | ".join(row) + " |")
        counts = summarize(self.outcomes)
        lines.append("")
        lines.append("Summary: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
        return "\n".join(lines) + "\n"

    def save(self, output_path: str, format_type: str = 'json') -> None:
        text = self.generate(format_type)
        try:
            with open(output_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
        except OSError as e:
            raise ConfigError(f"cannot write report to {output_path}: {e}") from e


def validate_report(doc: Dict[str, Any]) -> None:
    with open(REPORT_SCHEMA_PATH, 'r', encoding='utf-8') as f:
        schema = json.load(f)
    jsonschema.validate(instance=doc, schema=schema)
