"""
fb/cli/render.py
────────────────
Report model and its two renderings.
  • TSV (default): header comments, one block per table, flag lines
  • JSON: the same payload as one sorted object
Both end with a SHA-256 fingerprint of the payload bytes, so two runs on
the same input can be compared without diffing the tables.
"""

import json
from dataclasses import dataclass, field

from cryptography.hazmat.primitives import hashes

from core.config import APP_NAME, FORMATS
from core.errors import DescriptorError


@dataclass
class Table:
    title: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)


@dataclass
class Report:
    verb: str
    inputs: dict[str, str] = field(default_factory=dict)
    tables: list[Table] = field(default_factory=list)
    flags: dict[str, object] = field(default_factory=dict)
    ok: bool = True

    def table(self, title: str, columns) -> Table:
        t = Table(title, tuple(columns))
        self.tables.append(t)
        return t


def sign_row(signs) -> str:
    """(-1, 1, 1) → "- + +"."""
    return " ".join("-" if s < 0 else "+" for s in signs)


def fingerprint(data: bytes) -> str:
    digest = hashes.Hash(hashes.SHA256())
    digest.update(data)
    return digest.finalize().hex()


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (tuple, list)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def _json_value(v):
    if isinstance(v, tuple):
        return [_json_value(x) for x in v]
    if isinstance(v, list):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    return v


# ══════════════════════════════════════════════════════════════════════════════
# RENDERERS
# ══════════════════════════════════════════════════════════════════════════════

def render_tsv(report: Report) -> str:
    lines = [f"# {APP_NAME} {report.verb}"]
    for key, value in report.inputs.items():
        lines.append(f"# {key}\t{value}")
    for t in report.tables:
        lines.append(f"## {t.title}")
        lines.append("\t".join(t.columns))
        lines.extend("\t".join(_cell(v) for v in row) for row in t.rows)
    for key, value in report.flags.items():
        lines.append(f"{key}\t{_cell(value)}")
    body = "\n".join(lines) + "\n"
    return body + f"# sha256 {fingerprint(body.encode('utf-8'))}\n"


def render_json(report: Report) -> str:
    payload = {
        "verb": report.verb,
        "inputs": dict(report.inputs),
        "tables": [
            {"title": t.title, "columns": list(t.columns), "rows": _json_value(t.rows)}
            for t in report.tables
        ],
        "flags": _json_value(report.flags),
    }
    body = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    payload["fingerprint"] = fingerprint(body.encode("utf-8"))
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def render(report: Report, fmt: str = "tsv") -> str:
    if fmt not in FORMATS:
        raise DescriptorError(f"unknown format {fmt!r}")
    return render_tsv(report) if fmt == "tsv" else render_json(report)
