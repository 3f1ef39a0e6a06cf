"""
Plain-text and JSON rendering of command reports.

Both renderings depend only on the report contents, so repeated runs and
runs with different worker counts produce identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, List

import numpy as np

from ..models import CommandReport

FORMATS = ("text", "json")


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (Fraction, Path)):
        return str(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def inline_value(value: Any) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, dict):
        return ", ".join(f"{k}={inline_value(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(inline_value(v) for v in value) + "]"
    return json.dumps(value, sort_keys=True, default=_json_default)


def _section_lines(title: str, body: Any) -> List[str]:
    lines = [f"[{title}]"]
    if not isinstance(body, dict):
        lines.append(f"  {inline_value(body)}")
        return lines
    for key, value in body.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            lines.append(f"  {key}:")
            lines.extend(f"    - {inline_value(v)}" for v in value)
        elif isinstance(value, list) and len(value) > 8:
            lines.append(f"  {key}:")
            lines.extend(f"    {inline_value(v)}" for v in value)
        else:
            lines.append(f"  {key}: {inline_value(value)}")
    return lines


def render_text(report: CommandReport) -> str:
    lines = [f"ficoder {report.command}: {report.status}"]
    if report.validation is not None:
        validation = report.validation
        lines.append(f"  {validation.error_count} error(s), {validation.warning_count} warning(s)")
        for issue in validation.errors + validation.warnings + validation.notes:
            lines.append(f"  {issue.severity.value}: {issue}")
        if validation.summary:
            lines.append("")
            lines.extend(_section_lines("summary", validation.summary))
    else:
        for title, body in report.sections.items():
            lines.append("")
            lines.extend(_section_lines(title, body))
    if report.listing:
        lines.append("")
        lines.extend(report.listing)
    return "\n".join(lines) + "\n"


def render_json(report: CommandReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=_json_default) + "\n"


def render_report(report: CommandReport, fmt: str = "text") -> bytes:
    """
    Serialise a report.

    Args:
        report: The command report
        fmt: "text" or "json"
    """
    if fmt == "json":
        return render_json(report).encode("utf-8")
    if fmt == "text":
        return render_text(report).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
