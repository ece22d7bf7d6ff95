"""Deterministic JSON and CSV serialization of command reports.

Exact values never pass through floats.  A rational is written as the
string ``"num/den"`` (or ``"num"`` when integral) and gets a companion
``<key>_float`` column.  Integers too large for a double are written as
decimal strings.  Every report carries a ``columns`` map from row key to
type, which is what lets :func:`parse_json` and :func:`parse_csv` rebuild
the exact values.

The CSV form is one ``#``-prefixed line holding the JSON header (everything
except ``rows``), then an ordinary header row and one line per row.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

__all__ = [
    "StatReport",
    "render_value",
    "parse_json",
    "parse_csv",
    "load_schema",
    "SAFE_INT",
]

SAFE_INT = 2**53

def _kind(v) -> str | None:
    if v is None:
        return None
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, int):
        return "integer"
    if isinstance(v, Fraction):
        return "rational"
    if isinstance(v, float):
        return "float"
    if isinstance(v, str):
        return "string"
    raise TypeError(f"cannot serialize {type(v).__name__} in a report row")


def render_value(v, column: str | None = None):
    """JSON scalar for a row value; ``column`` is the column type when known."""
    kind = _kind(v)
    if kind == "integer" and column != "rational":
        return v if -SAFE_INT < v < SAFE_INT else str(v)
    if kind in ("integer", "rational"):
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if kind == "float":
        v = float(v)
        return "nan" if v != v else v
    return v


def _parse_value(raw, kind: str):
    if raw is None:
        return None
    if kind == "integer":
        return int(raw)
    if kind == "rational":
        return Fraction(raw)
    if kind == "float":
        return float(raw)
    if kind == "boolean":
        return raw if isinstance(raw, bool) else raw == "true"
    return str(raw)


@dataclass
class StatReport:
    """One command's output.  ``rows`` hold plain Python values; rationals stay exact."""

    command: str
    descriptor: dict | None
    params: dict
    rows: list = field(default_factory=list)
    status: str = "ok"
    provenance: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add_row(self, **values):
        row = {}
        for key, v in values.items():
            row[key] = v
            if isinstance(v, Fraction):
                row[f"{key}_float"] = float(v)
        self.rows.append(row)

    def columns(self) -> dict:
        cols: dict = {}
        for row in self.rows:
            for key, v in row.items():
                kind = _kind(v)
                if kind is None:
                    cols.setdefault(key, None)
                    continue
                old = cols.get(key)
                if old is None:
                    cols[key] = kind
                elif old != kind:
                    if {old, kind} == {"integer", "rational"}:
                        cols[key] = "rational"
                    else:
                        raise TypeError(f"column {key!r} mixes {old} and {kind}")
        return {k: (v or "string") for k, v in cols.items()}

    def header(self) -> dict:
        return {
            "command": self.command,
            "status": self.status,
            "descriptor": self.descriptor,
            "params": _render_block(self.params),
            "summary": _render_block(self.summary),
            "provenance": self.provenance,
            "notes": list(self.notes),
            "columns": self.columns(),
        }

    def to_dict(self) -> dict:
        out = self.header()
        cols = out["columns"]
        out["rows"] = [{k: render_value(row[k], cols[k]) for k in cols if row.get(k) is not None} for row in self.rows]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        head = self.header()
        buf = io.StringIO()
        buf.write("# " + json.dumps(head, separators=(",", ":"), ensure_ascii=False) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        cols = head["columns"]
        w.writerow(list(cols))
        for row in self.rows:
            w.writerow([_csv_cell(render_value(row[k], t)) if row.get(k) is not None else "" for k, t in cols.items()])
        return buf.getvalue()


def _render_block(block: dict) -> dict:
    # parameter and summary blocks are small; values keep their JSON rendering on parse-back
    out = {}
    for k, v in block.items():
        if isinstance(v, (list, tuple)):
            out[k] = [render_value(x) for x in v]
        elif isinstance(v, dict):
            out[k] = _render_block(v)
        else:
            out[k] = render_value(v)
    return out


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _from_header(head: dict, raw_rows: list) -> StatReport:
    cols = head["columns"]
    rows = []
    for raw in raw_rows:
        rows.append({k: _parse_value(raw[k], cols[k]) for k in cols if k in raw})
    return StatReport(
        command=head["command"],
        descriptor=head["descriptor"],
        params=dict(head["params"]),
        rows=rows,
        status=head["status"],
        provenance=head["provenance"],
        notes=list(head.get("notes", [])),
        summary=dict(head.get("summary", {})),
    )


def parse_json(text: str) -> StatReport:
    data = json.loads(text)
    return _from_header(data, data["rows"])


def parse_csv(text: str) -> StatReport:
    first, _, body = text.partition("\n")
    if not first.startswith("# "):
        raise ValueError("CSV report must start with a '# ' header line")
    head = json.loads(first[2:])
    reader = csv.reader(io.StringIO(body))
    names = next(reader)
    cols = head["columns"]
    raw_rows = []
    for cells in reader:
        raw = {}
        for name, cell in zip(names, cells):
            if cell == "":
                continue
            if cols[name] == "float" and cell == "nan":
                raw[name] = "nan"
            else:
                raw[name] = cell
        raw_rows.append(raw)
    return _from_header(head, raw_rows)


def load_schema(name: str) -> dict:
    """A bundled JSON schema: ``"report"`` or ``"descriptor"``."""
    path = resources.files("cyclestat") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))
