"""Citation file parsing and report emission."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from .errors import ParseError

__all__ = [
    "ScholarRecord",
    "ReportTable",
    "parse_citation_file",
    "parse_citation_text",
    "emit_table",
    "render_table",
    "format_set",
]


@dataclass
class ScholarRecord:
    scholar_id: str
    counts: list = field(default_factory=list)

    def __post_init__(self):
        if not self.scholar_id:
            raise ParseError("empty scholar id")


def _parse_count(text, scholar, line=None):
    raw = text.strip()
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"non-integer citation count {raw!r} for scholar {scholar!r}", line) from None
    if value < 0:
        raise ParseError(f"negative citation count {value} for scholar {scholar!r}", line)
    return value


def _parse_csv(text):
    records: dict[str, ScholarRecord] = {}
    reader = csv.reader(io.StringIO(text, newline=""))
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 'scholar_id,count', got {len(row)} field(s)", lineno)
        scholar, count = row[0].strip(), row[1].strip()
        if lineno == 1 and not _looks_numeric(count):
            continue  # header
        if not scholar:
            raise ParseError("empty scholar id", lineno)
        value = _parse_count(count, scholar, lineno)
        records.setdefault(scholar, ScholarRecord(scholar)).counts.append(value)
    return list(records.values())


def _looks_numeric(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _key_line(text, key, occurrence=0):
    """Line number of the ``occurrence``-th appearance of ``key`` as a JSON string."""
    token = json.dumps(key, ensure_ascii=False)
    pos = -1
    for _ in range(occurrence + 1):
        pos = text.find(token, pos + 1)
        if pos < 0:
            token = json.dumps(key)
            pos = text.find(token)
            break
    return text.count("\n", 0, pos) + 1 if pos >= 0 else 1


def _parse_json(text):
    def reject_duplicates(pairs):
        out = {}
        for key, value in pairs:
            if key in out:
                raise ParseError(f"duplicate scholar {key!r}", _key_line(text, key, 1))
            out[key] = value
        return out

    try:
        data = json.loads(text, object_pairs_hook=reject_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("JSON input must be an object mapping scholar id to counts", 1)
    records = []
    for scholar, counts in data.items():
        line = _key_line(text, scholar)
        if not isinstance(counts, list):
            raise ParseError(f"counts for scholar {scholar!r} must be an array", line)
        values = []
        for c in counts:
            if isinstance(c, bool) or not isinstance(c, int):
                raise ParseError(f"non-integer citation count {c!r} for scholar {scholar!r}", line)
            if c < 0:
                raise ParseError(f"negative citation count {c} for scholar {scholar!r}", line)
            values.append(c)
        records.append(ScholarRecord(scholar, values))
    return records


def parse_citation_text(text: str, fmt: str = "csv") -> list[ScholarRecord]:
    if fmt == "csv":
        return _parse_csv(text)
    if fmt == "json":
        return _parse_json(text)
    raise ValueError(f"unknown input format {fmt!r}")


def parse_citation_file(source, fmt: str | None = None) -> list[ScholarRecord]:
    """Read per-paper citation counts grouped by scholar.

    CSV: one ``scholar_id,count`` line per paper, optional header.
    JSON: ``{"scholar_id": [counts, ...], ...}``.  ``fmt`` defaults to the
    file extension.  Records keep first-appearance order.
    """
    if hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        name = getattr(source, "name", "")
    else:
        name = os.fspath(source)
        with open(name, encoding="utf-8", newline="") as fh:
            text = fh.read()
    if text.startswith("\ufeff"):
        text = text[1:]
    if fmt is None:
        fmt = "json" if str(name).lower().endswith(".json") else "csv"
    return parse_citation_text(text, fmt)


def format_set(lo: int, hi: int) -> str:
    """Consecutive-integer set: ``{4}``, ``{4,5}``, ``{42,…,50}``."""
    if lo == hi:
        return f"{{{lo}}}"
    if hi == lo + 1:
        return f"{{{lo},{hi}}}"
    return f"{{{lo},…,{hi}}}"


@dataclass
class ReportTable:
    """Rows of named values with a fixed column order.

    ``uncertain`` maps a column to the column holding its standard error;
    the tsv writer emits the error right after the value as ``<col>±``.
    """

    columns: list
    rows: list = field(default_factory=list)
    uncertain: dict = field(default_factory=dict)
    title: str | None = None


def _text_cell(value):
    if isinstance(value, float):
        return f"{value:.4f}"
    if isinstance(value, dict):
        return ",".join(f"{k}={v}" for k, v in value.items())
    if value is None:
        return "-"
    return str(value)


def _tsv_cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return ",".join(f"{k}={v}" for k, v in value.items())
    if value is None:
        return ""
    return str(value)


def render_table(table: ReportTable, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(table.rows, indent=2, ensure_ascii=False) + "\n"

    se_columns = set(table.uncertain.values())
    if fmt == "tsv":
        header = []
        for col in table.columns:
            if col in se_columns:
                continue
            header.append(col)
            if col in table.uncertain:
                header.append(f"{col}±")
        lines = ["\t".join(header)]
        for row in table.rows:
            cells = []
            for col in table.columns:
                if col in se_columns:
                    continue
                cells.append(_tsv_cell(row.get(col)))
                if col in table.uncertain:
                    cells.append(_tsv_cell(row.get(table.uncertain[col])))
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    if fmt != "text":
        raise ValueError(f"unknown output format {fmt!r}")
    visible = [c for c in table.columns if c not in se_columns]
    grid = [visible]
    for row in table.rows:
        cells = []
        for col in visible:
            cell = _text_cell(row.get(col))
            if col in table.uncertain and row.get(table.uncertain[col]) is not None:
                cell += f" ±{row[table.uncertain[col]]:.4f}"
            cells.append(cell)
        grid.append(cells)
    widths = [max(len(r[i]) for r in grid) for i in range(len(visible))]
    lines = []
    if table.title:
        lines.append(table.title)
    for r in grid:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def emit_table(table: ReportTable, fmt: str = "text", destination=None) -> None:
    """Write ``table`` to a path, a text stream, or stdout when ``None``."""
    text = render_table(table, fmt)
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        path = os.fspath(destination)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc.strerror}") from exc
