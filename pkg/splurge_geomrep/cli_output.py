"""
CLI output helpers for splurge-geomrep.

Contains text and JSON rendering utilities for check reports.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

import json
import math
from typing import Any

try:
    from tabulate import tabulate  # type: ignore
except Exception:  # pragma: no cover - fallback when tabulate unavailable
    tabulate = None

from splurge_geomrep.result_models import CheckResult, CheckStatus, Report, report_to_dict, round_residual

# Private constants for rendering
_SEPARATOR_LENGTH: int = 60
_DASH_SEPARATOR_LENGTH: int = 40
_HEADERS: list[str] = ["Check", "Residual", "Tolerance", "Status"]
_ERROR_EMOJI: str = "❌"
_SUCCESS_EMOJI: str = "✅"
_UNDETERMINED_EMOJI: str = "➖"
_STATUS_TAGS: dict[CheckStatus, tuple[str, str]] = {
    CheckStatus.PASS: (_SUCCESS_EMOJI, "[PASS]"),
    CheckStatus.FAIL: (_ERROR_EMOJI, "[FAIL]"),
    CheckStatus.NOT_DETERMINED: (_UNDETERMINED_EMOJI, "[N/D]"),
}


def simple_table_format(headers: list[str], rows: list[list[Any]]) -> str:
    """
    Pipe table used when tabulate is not installed.

    Numeric-looking cells are right-aligned so residual exponents line up.
    Cells beyond the header count are kept and padded to their own width.
    """
    if not headers or not rows:
        return "(No data)"

    ncols = max(len(headers), *(len(row) for row in rows))
    cells = [[str(v) for v in headers] + [""] * (ncols - len(headers))]
    cells += [[str(v) for v in row] + [""] * (ncols - len(row)) for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(ncols)]

    def render(line: list[str], align_numbers: bool) -> str:
        padded = [
            text.rjust(width) if align_numbers and _looks_numeric(text) else text.ljust(width)
            for text, width in zip(line, widths)
        ]
        return "| " + " | ".join(padded) + " |"

    separator = "|" + "|".join("-" * (width + 2) for width in widths) + "|"
    return "\n".join([render(cells[0], False), separator, *(render(line, True) for line in cells[1:])])


def _looks_numeric(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def format_residual(value: float) -> str:
    """Seven significant digits, matching the JSON rendering."""
    if math.isnan(value):
        return "n/a"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{round_residual(value):.6e}"


def _status_label(status: CheckStatus, no_emoji: bool) -> str:
    emoji, tag = _STATUS_TAGS[status]
    return tag if no_emoji else f"{emoji} {status.value}"


def _check_row(check: CheckResult, no_emoji: bool) -> list[str]:
    bound = ">=" if check.minimum else "<="
    return [
        check.name,
        format_residual(check.residual),
        f"{bound} {check.tolerance:g}",
        _status_label(check.status, no_emoji),
    ]


def _format_metadata_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def render_report(
    report: Report,
    *,
    output_json: bool = False,
    no_emoji: bool = False,
    include_timings: bool = False,
) -> str:
    """Render a report as text or JSON.

    Args:
        report: Report to render.
        output_json: If True, render JSON instead of a human-readable table.
        no_emoji: If True, use ASCII tags instead of emoji.
        include_timings: If True, append the recorded timings. Without them the
            output is identical for identical (config, seed).

    Returns:
        The rendered report without a trailing newline.
    """
    if output_json:
        return json.dumps(report_to_dict(report, include_timings), ensure_ascii=False, indent=2)

    lines = [
        "=" * _SEPARATOR_LENGTH,
        report.title,
        "=" * _SEPARATOR_LENGTH,
        f"seed: {report.seed if report.seed is not None else '-'}",
        f"config_hash: {report.config_hash or '-'}",
    ]
    for key, value in report.metadata.items():
        lines.append(f"{key}: {_format_metadata_value(value)}")
    lines.append("")

    rows = [_check_row(check, no_emoji) for check in report.checks]
    if tabulate is not None and rows:
        lines.append(tabulate(rows, headers=_HEADERS, tablefmt="grid", disable_numparse=True))
    else:
        lines.append(simple_table_format(_HEADERS, rows))

    if include_timings and report.timings:
        lines.append("")
        lines.append("Timings (s):")
        for name, seconds in report.timings.items():
            lines.append(f"  {name}: {seconds:.3f}")

    lines.append("-" * _DASH_SEPARATOR_LENGTH)
    failed = len(report.failed_checks)
    undetermined = sum(1 for c in report.checks if c.status == CheckStatus.NOT_DETERMINED)
    if failed:
        prefix = "[ERROR]" if no_emoji else _ERROR_EMOJI
        summary = f"{prefix} {failed} of {len(report.checks)} checks failed"
    else:
        prefix = "[OK]" if no_emoji else _SUCCESS_EMOJI
        summary = f"{prefix} All {len(report.checks) - undetermined} determined checks passed"
    if undetermined:
        summary += f" ({undetermined} not determined)"
    lines.append(summary)
    return "\n".join(lines)


def print_report(
    report: Report,
    *,
    output_json: bool = False,
    no_emoji: bool = False,
    include_timings: bool = False,
) -> None:
    """Print ``render_report`` output to stdout."""
    print(render_report(report, output_json=output_json, no_emoji=no_emoji, include_timings=include_timings))
