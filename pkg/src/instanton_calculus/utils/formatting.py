"""Report rendering for the command line: human text, TSV and JSON."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from enum import Enum
from typing import Any

import pandas as pd
from pydantic import BaseModel

FORMATS = ("human", "tsv", "json")


def to_jsonable(value: Any) -> Any:
    """Sets become sorted lists; models and enums become plain data."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(mode="json"))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def dump_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False)


def format_cell(value: Any) -> str:
    """Single-element sets print bare; larger ones as {a, b}."""
    value = to_jsonable(value)
    if value is None:
        return ""
    if isinstance(value, list):
        if len(value) == 1 and not isinstance(value[0], (list, dict)):
            return str(value[0])
        return "{" + ", ".join(format_cell(v) for v in value) + "}"
    if isinstance(value, dict):
        return ", ".join(f"{k}={format_cell(v)}" for k, v in sorted(value.items()))
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _frame(rows: Sequence[Mapping[str, Any]], columns: Sequence[str] | None) -> pd.DataFrame:
    cols = list(columns) if columns else list(rows[0].keys()) if rows else []
    data = [[format_cell(row.get(c)) for c in cols] for row in rows]
    return pd.DataFrame(data, columns=cols, dtype=object)


def render_table(
    rows: Sequence[Mapping[str, Any]], fmt: str, columns: Sequence[str] | None = None
) -> str:
    """Render rows as an aligned table, TSV with header, or a JSON array."""
    if fmt == "json":
        return dump_json(list(rows))
    frame = _frame(rows, columns)
    if fmt == "tsv":
        return frame.to_csv(sep="\t", index=False, lineterminator="\n").rstrip("\n")
    if frame.empty:
        return "(none)"
    return frame.to_string(index=False)


def render_report(
    payload: Mapping[str, Any],
    fmt: str,
    lines: Iterable[str] = (),
    rows: Sequence[Mapping[str, Any]] | None = None,
    columns: Sequence[str] | None = None,
) -> str:
    """Render a report.

    ``json`` dumps ``payload``. ``tsv`` prints ``rows`` when given, otherwise a
    key/value table of ``payload``. ``human`` prints ``lines`` followed by the
    aligned table of ``rows``.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format {fmt!r} (choose from {', '.join(FORMATS)})")
    if fmt == "json":
        return dump_json(payload)
    if fmt == "tsv":
        if rows is not None:
            return render_table(rows, fmt, columns)
        pairs = [{"key": k, "value": payload[k]} for k in sorted(payload)]
        return render_table(pairs, fmt, ("key", "value"))
    parts = list(lines)
    if rows is not None:
        parts.append(render_table(rows, fmt, columns))
    return "\n".join(parts)
