"""
Logging section of experiment configs.

An experiment config may carry a ``logging`` object; ``verify`` applies it
before running the suite. The ``--log-level`` option still wins over the
config's level.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import logging
import os
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

from splurge_geomrep.config.constants import DEFAULT_LOG_FORMAT, DEFAULT_LOG_LEVEL
from splurge_geomrep.errors import ConfigValidationError
from splurge_geomrep.logging.core import setup_logging

_LOG_FILENAME: str = "splurge_geomrep.log"
_DEFAULT_BACKUP_COUNT: int = 7


class LogLevel(Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"

    @classmethod
    def from_string(cls, level: str) -> "LogLevel":
        """Case-insensitive; unknown names give the default level."""
        return _lenient(cls, level, cls(DEFAULT_LOG_LEVEL))


class LogFormat(Enum):
    TEXT = "TEXT"
    JSON = "JSON"

    @classmethod
    def from_string(cls, format_str: str) -> "LogFormat":
        """Case-insensitive; unknown names give TEXT."""
        return _lenient(cls, format_str, cls(DEFAULT_LOG_FORMAT))


def _lenient(enum_cls: Any, text: Any, fallback: Any) -> Any:
    try:
        return enum_cls(str(text).strip().upper())
    except ValueError:
        return fallback


@dataclass
class LoggingConfig:
    """
    Where and how a run logs.

    Attributes:
        level: Package log level
        format: TEXT or JSON, used for the log file
        enable_console: Log to stderr
        enable_file: Log to a rotating file, which needs ``log_file`` or ``log_dir``
        log_file: Explicit file path
        log_dir: Directory for ``splurge_geomrep.log``
        backup_count: Rotated files kept
    """

    level: LogLevel = LogLevel.WARNING
    format: LogFormat = LogFormat.TEXT
    enable_console: bool = True
    enable_file: bool = False
    log_file: str | None = None
    log_dir: str | None = None
    backup_count: int = _DEFAULT_BACKUP_COUNT

    def __post_init__(self) -> None:
        if self.backup_count < 0:
            raise ConfigValidationError("Backup count must be non-negative", {"field": "logging.backup_count"})
        if self.enable_file and self.get_log_file_path() is None:
            raise ConfigValidationError(
                "Log file or directory must be specified when file logging is enabled",
                {"field": "logging.enable_file"},
            )

    @classmethod
    def from_dict(cls, section: dict[str, Any]) -> "LoggingConfig":
        """Build from the ``logging`` object of a config; missing keys keep their defaults."""
        defaults = cls()
        return cls(
            level=LogLevel.from_string(section.get("level", defaults.level.value)),
            format=LogFormat.from_string(section.get("format", defaults.format.value)),
            enable_console=bool(section.get("enable_console", defaults.enable_console)),
            enable_file=bool(section.get("enable_file", defaults.enable_file)),
            log_file=section.get("log_file"),
            log_dir=section.get("log_dir"),
            backup_count=int(section.get("backup_count", defaults.backup_count)),
        )

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["level"] = self.level.value
        data["format"] = self.format.value
        return data

    @property
    def is_json_format(self) -> bool:
        return self.format == LogFormat.JSON

    def get_log_file_path(self) -> str | None:
        """The explicit file, else ``<log_dir>/splurge_geomrep.log``, else None."""
        if self.log_file:
            return self.log_file
        if self.log_dir:
            return os.path.join(self.log_dir, _LOG_FILENAME)
        return None

    def apply(self, level_override: str | None = None) -> logging.Logger:
        """
        Configure package logging from this section.

        Raises:
            ConfigValidationError: If ``level_override`` is not a log level
        """
        return setup_logging(
            log_level=level_override or self.level.value,
            log_file=self.get_log_file_path() if self.enable_file else None,
            enable_console=self.enable_console,
            enable_json=self.is_json_format,
            backup_count=self.backup_count,
        )
