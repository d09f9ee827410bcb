"""Deterministic CSV/JSON rendering of rows and reports."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, TextIO

from .config import SIGNIFICANT_DIGITS

FORMATS = ("csv", "json")


def format_number(value: Any) -> str:
    """Fixed 12-significant-digit text, independent of locale."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def json_safe(value: Any) -> Any:
    """Round floats to the output precision; non-finite ones become the CSV strings."""
    if isinstance(value, Mapping):
        return {key: json_safe(v) for key, v in value.items()}
    if isinstance(value, list):
        return [json_safe(v) for v in value]
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_number(value)
        return float(format_number(value))
    return value


def render_csv(rows: Iterable[Mapping[str, Any]]) -> str:
    rows = list(rows)
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    header = list(rows[0])
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(row[name]) for name in header])
    return buffer.getvalue()


def render_json(payload: Mapping[str, Any] | Iterable[Mapping[str, Any]]) -> str:
    data = payload if isinstance(payload, Mapping) else list(payload)
    return json.dumps(json_safe(data), indent=2) + "\n"


def render(rows: list[Mapping[str, Any]], fmt: str, single: bool = False) -> str:
    """Render rows as CSV or JSON; ``single`` emits a JSON object instead of an array."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    if fmt == "csv":
        return render_csv(rows)
    return render_json(rows[0] if single else rows)


def emit(text: str, out: str | Path | None, stream: TextIO | None = None) -> None:
    """Write to ``out`` when given, otherwise to ``stream`` (standard output)."""
    if out is None:
        (stream or sys.stdout).write(text)
        return
    Path(out).write_text(text, encoding="utf-8", newline="\n")
