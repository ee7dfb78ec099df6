"""Reports: ordered facts plus labelled tables, rendered as text or JSON."""
from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field

SCHEMA = "localerel-report/1"


@dataclass(frozen=True)
class Table:
    """Rows and columns are labelled by element names; ``corner`` heads the label column."""

    name: str
    corner: str
    columns: tuple
    rows: tuple  # ((row label, (cell, ...)), ...)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple((str(lbl), tuple(cells)) for lbl, cells in self.rows))
        for lbl, cells in self.rows:
            if len(cells) != len(self.columns):
                raise ValueError(f"row {lbl!r} has {len(cells)} cells for {len(self.columns)} columns")

    def row(self, label):
        for lbl, cells in self.rows:
            if lbl == label:
                return cells
        raise KeyError(label)

    def as_dict(self):
        return {lbl: dict(zip(self.columns, cells)) for lbl, cells in self.rows}


@dataclass
class Report:
    title: str = ""
    facts: list = field(default_factory=list)   # [(key, value)], in insertion order
    tables: list = field(default_factory=list)
    exit_code: int = 0

    def fact(self, key, value):
        self.facts.append((key, value))
        return self

    def table(self, t):
        self.tables.append(t)
        return self

    def get(self, key, default=None):
        for k, v in self.facts:
            if k == key:
                return v
        return default

    def get_table(self, name):
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    def is_empty(self):
        return not (self.title or self.facts or self.tables)

    def to_structured(self):
        return {
            "schema": SCHEMA,
            "title": self.title,
            "exit_code": self.exit_code,
            "facts": [[k, v] for k, v in self.facts],
            "tables": [{"name": t.name, "corner": t.corner, "columns": list(t.columns),
                        "rows": [[lbl, list(cells)] for lbl, cells in t.rows]}
                       for t in self.tables],
        }

    @classmethod
    def from_structured(cls, data):
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(
            title=data["title"],
            facts=[(k, v) for k, v in data["facts"]],
            tables=[Table(t["name"], t["corner"], t["columns"],
                          [(lbl, cells) for lbl, cells in t["rows"]]) for t in data["tables"]],
            exit_code=data["exit_code"],
        )


def display_width(s):
    return sum(0 if unicodedata.combining(ch) else
               2 if unicodedata.east_asian_width(ch) in "WF" else 1 for ch in s)


def _pad(s, width):
    return s + " " * (width - display_width(s))


def render_table(t):
    header = [t.corner, *t.columns]
    body = [[lbl, *cells] for lbl, cells in t.rows]
    widths = [max(display_width(str(r[i])) for r in [header, *body]) for i in range(len(header))]

    def line(cells):
        left = _pad(str(cells[0]), widths[0])
        right = "  ".join(_pad(str(c), w) for c, w in zip(cells[1:], widths[1:]))
        return f"{left} | {right}".rstrip()

    rule = "-" * widths[0] + "-+-" + "-" * (sum(widths[1:]) + 2 * max(len(widths) - 2, 0))
    return "\n".join([t.name, line(header), rule, *(line(r) for r in body)])


def render_report(report, fmt="table"):
    """Text for ``report``; an empty report renders as the empty string."""
    if fmt == "structured":
        if report.is_empty():
            return ""
        return json.dumps(report.to_structured(), sort_keys=True, ensure_ascii=False,
                          indent=2) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    if report.is_empty():
        return ""
    parts = []
    if report.title:
        parts.append(report.title)
    if report.facts:
        width = max(display_width(k) for k, _ in report.facts)
        parts.append("\n".join(f"{_pad(k, width)} : {v}" for k, v in report.facts))
    parts.extend(render_table(t) for t in report.tables)
    return "\n\n".join(parts) + "\n"


def parse_structured(text):
    """Inverse of ``render_report(..., "structured")``."""
    if not text.strip():
        return Report()
    return Report.from_structured(json.loads(text))
