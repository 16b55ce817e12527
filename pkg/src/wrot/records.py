"""Flat text records shared by run statistics and attack reports."""

from __future__ import annotations

import json
from typing import Any, Mapping


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_record(record: Mapping[str, Any], as_json: bool = False) -> str:
    """Render a record as ``key=value`` pairs, or as one line of strict JSON.

    Key order is preserved. Floats use the shortest round-trip representation.
    """
    if as_json:
        return json.dumps(dict(record), allow_nan=False)
    return " ".join(f"{k}={_fmt(v)}" for k, v in record.items())


def parse_record(line: str) -> dict[str, str]:
    """Inverse of the text form of :func:`format_record` (values stay strings)."""
    out = {}
    for item in line.split():
        key, _, value = item.partition("=")
        out[key] = value
    return out
