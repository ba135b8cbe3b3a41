"""
Result models for residual checks and reports.

Every verification in the package produces ``CheckResult`` entries; the CLI
collects them into a ``Report`` that renders to text or JSON.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class CheckStatus(str, Enum):
    """Outcome of a single check."""

    PASS = "pass"
    FAIL = "fail"
    NOT_DETERMINED = "not_determined"


def round_residual(value: float) -> float:
    """Round to 7 significant digits so every rendering shows the same number."""
    if not math.isfinite(value):
        return value
    return float(f"{value:.6e}")


@dataclass(frozen=True)
class CheckResult:
    """Typed representation of one residual check.

    Attributes:
        name: Dotted check name, e.g. ``gns.homomorphism``.
        residual: Measured value.
        tolerance: Threshold the residual is judged against.
        status: Pass, fail or not determined.
        minimum: When true the residual must be at least the tolerance
            (singular values, convergence orders) instead of at most.
    """

    name: str
    residual: float
    tolerance: float
    status: CheckStatus
    minimum: bool = False

    @classmethod
    def evaluate(cls, name: str, residual: float, tolerance: float, minimum: bool = False) -> CheckResult:
        value = float(residual)
        if math.isnan(value):
            passed = False
        elif minimum:
            passed = value >= tolerance
        else:
            passed = value <= tolerance
        return cls(name, value, float(tolerance), CheckStatus.PASS if passed else CheckStatus.FAIL, minimum)

    @classmethod
    def exact(cls, name: str, actual: int, expected: int) -> CheckResult:
        """Integer comparison reported as |actual − expected| against tolerance 0."""
        return cls.evaluate(name, float(abs(actual - expected)), 0.0)

    @classmethod
    def flag(cls, name: str, ok: bool) -> CheckResult:
        """Boolean predicate reported as residual 0 or 1."""
        return cls.evaluate(name, 0.0 if ok else 1.0, 0.0)

    @classmethod
    def not_determined(cls, name: str) -> CheckResult:
        return cls(name, float("nan"), 0.0, CheckStatus.NOT_DETERMINED)

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS


@dataclass
class Report:
    """A titled collection of checks plus the run's environment echo."""

    title: str
    seed: int | None
    config_hash: str | None
    checks: list[CheckResult] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True when no check failed; undetermined checks do not fail a report."""
        return all(c.status != CheckStatus.FAIL for c in self.checks)

    @property
    def failed_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == CheckStatus.FAIL]

    def extend(self, checks: list[CheckResult]) -> None:
        self.checks.extend(checks)

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


def _json_number(value: float) -> float | str | None:
    if math.isnan(value):
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return round_residual(value)


def check_result_to_dict(result: CheckResult) -> dict[str, Any]:
    """Convert a ``CheckResult`` to a JSON-ready dict."""
    data: dict[str, Any] = {
        "name": result.name,
        "residual": _json_number(result.residual),
        "tolerance": result.tolerance,
        "status": result.status.value,
    }
    if result.minimum:
        data["minimum"] = True
    return data


def report_to_dict(report: Report, include_timings: bool = False) -> dict[str, Any]:
    """Convert a ``Report`` to a JSON-ready dict. Timings are opt-in so output stays reproducible."""
    data: dict[str, Any] = {
        "title": report.title,
        "seed": report.seed,
        "config_hash": report.config_hash,
        "passed": report.passed,
        "metadata": dict(report.metadata),
        "checks": [check_result_to_dict(c) for c in report.checks],
    }
    if include_timings:
        data["timings"] = {k: round_residual(v) for k, v in report.timings.items()}
    return data


def merge_worst(checks: list[CheckResult]) -> list[CheckResult]:
    """Collapse repeated check names to their worst residual, keeping first-seen order."""
    merged: dict[str, CheckResult] = {}
    for check in checks:
        current = merged.get(check.name)
        if current is None or check.status == CheckStatus.NOT_DETERMINED:
            merged.setdefault(check.name, check)
            continue
        if current.status == CheckStatus.NOT_DETERMINED:
            merged[check.name] = check
            continue
        worse = check.residual < current.residual if check.minimum else check.residual > current.residual
        if worse or math.isnan(check.residual):
            merged[check.name] = check
    return list(merged.values())
