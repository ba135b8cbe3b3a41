"""
Root of the splurge-geomrep error hierarchy.

Every error carries a message and a context dict (dimensions, residuals,
config field paths, line numbers). Numerical checks never raise; these
errors mark preconditions that make a computation meaningless.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import copy
from typing import Any

# Context keys that locate a problem in an input file, in display order.
_LOCATION_KEYS: tuple[tuple[str, str], ...] = (("field", "field"), ("line", "line"), ("column", "column"))


class SplurgeGeomrepError(Exception):
    """
    Base exception for all splurge-geomrep errors.

    Args:
        message: Human-readable description
        context: Extra facts about the failure; deep copied on construction
    """

    def __init__(self, message: str, context: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self._context: dict[str, Any] = copy.deepcopy(context) if context else {}

    @property
    def context(self) -> dict[str, Any]:
        return self._context

    def add_context(self, key: str, value: Any) -> None:
        self._context[key] = value

    def get_context(self, key: str, default: Any = None) -> Any:
        return self._context.get(key, default)

    def location(self) -> str:
        """``field ..., line ..., column ...`` for whichever keys are set, else ''."""
        parts = []
        for key, label in _LOCATION_KEYS:
            value = self._context.get(key)
            if value is not None and value != "":
                parts.append(f"{label} {value}")
        return ", ".join(parts)

    def __str__(self) -> str:
        return self.message

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.message!r}, {self._context!r})"

    def __eq__(self, other: Any) -> bool:
        return (
            isinstance(other, SplurgeGeomrepError)
            and type(self) is type(other)
            and (self.message, self._context) == (other.message, other._context)
        )

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.message, repr(sorted(self._context.items(), key=lambda kv: kv[0]))))


class ConfigurationError(SplurgeGeomrepError):
    """Experiment configs, tolerance profiles and logging settings."""


class ConfigValidationError(ConfigurationError):
    """A config parsed but its values are inconsistent."""


class ConfigFileError(ConfigurationError):
    """A config could not be found or read."""


class ValidationError(SplurgeGeomrepError):
    """Mathematical preconditions on inputs: shapes, self-adjointness, states, subalgebras."""


class OperationError(SplurgeGeomrepError):
    """A well-formed request that cannot be carried out, such as factoring a singular element."""
