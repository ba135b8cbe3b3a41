"""
Core logging functionality for splurge-geomrep.

Console output goes to stderr so that reports on stdout stay machine-readable.
File logging with timed rotation is opt-in.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

import json
import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Any

from splurge_geomrep.errors import ConfigValidationError
from splurge_geomrep.logging.context import RunIdFilter

_LOGGING_CONFIGURED = False
_LOGGING_CONFIG: dict[str, Any] = {}

_ROOT_LOGGER_NAME: str = "splurge_geomrep"
_DEFAULT_LOG_LEVEL: str = "WARNING"
_DEFAULT_LOG_FILENAME: str = "splurge_geomrep.log"
_VALID_LOG_LEVELS: set[str] = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}

# run_id is set by RunIdFilter on every package handler
_FILE_FORMAT: str = (
    "%(asctime)s - %(name)s - %(levelname)s - run=%(run_id)s - %(module)s:%(funcName)s:%(lineno)d - %(message)s"
)
_CONSOLE_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - run=%(run_id)s - %(message)s"


class _JsonFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "time": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "logger": record.name,
            "level": record.levelname,
            "run": getattr(record, "run_id", "-"),
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


def setup_logging(
    *,
    log_level: str = _DEFAULT_LOG_LEVEL,
    log_file: str | None = None,
    log_dir: str | None = None,
    enable_console: bool = True,
    enable_json: bool = False,
    backup_count: int = 7,
) -> logging.Logger:
    """
    Set up the package logger.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Specific log file path (optional)
        log_dir: Directory for log files (optional)
        enable_console: Whether to log to stderr
        enable_json: Whether to use JSON formatting for file logs
        backup_count: Number of rotated files to keep

    Returns:
        Configured logger instance

    Raises:
        ConfigValidationError: If log_level is invalid
    """
    global _LOGGING_CONFIGURED, _LOGGING_CONFIG

    level_name = log_level.upper()
    if level_name not in _VALID_LOG_LEVELS:
        raise ConfigValidationError(
            f"Invalid log level: {log_level}. Must be one of {sorted(_VALID_LOG_LEVELS)}",
            {"field": "logging.level"},
        )

    _LOGGING_CONFIG = {
        "log_level": level_name,
        "log_file": log_file,
        "log_dir": log_dir,
        "enable_console": enable_console,
        "enable_json": enable_json,
        "backup_count": backup_count,
    }

    log_path: Path | None = None
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
    elif log_dir:
        log_dir_path = Path(log_dir)
        log_dir_path.mkdir(parents=True, exist_ok=True)
        log_path = log_dir_path / _DEFAULT_LOG_FILENAME

    logger = logging.getLogger(_ROOT_LOGGER_NAME)
    logger.setLevel(getattr(logging, level_name))
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    if log_path is not None:
        file_handler = logging.handlers.TimedRotatingFileHandler(
            filename=str(log_path),
            when="midnight",
            interval=1,
            backupCount=backup_count,
            encoding="utf-8",
        )
        file_handler.setLevel(getattr(logging, level_name))
        if enable_json:
            file_handler.setFormatter(_JsonFormatter())
        else:
            file_handler.setFormatter(logging.Formatter(fmt=_FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
        file_handler.addFilter(RunIdFilter())
        logger.addHandler(file_handler)

    if enable_console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, level_name))
        console_handler.setFormatter(logging.Formatter(fmt=_CONSOLE_FORMAT, datefmt="%H:%M:%S"))
        console_handler.addFilter(RunIdFilter())
        logger.addHandler(console_handler)

    if not logger.handlers:
        logger.addHandler(logging.NullHandler())

    logger.propagate = False
    _LOGGING_CONFIGURED = True
    return logger


def get_logger(name: str | None = None) -> logging.Logger:
    """Get a logger, defaulting to the package root logger."""
    return logging.getLogger(name or _ROOT_LOGGER_NAME)


def configure_module_logging(module_name: str, *, log_level: str | None = None) -> logging.Logger:
    """
    Get the logger for a package module, setting up package logging on first use.

    Args:
        module_name: Short module name, e.g. ``"gns"``
        log_level: Level used only if logging is not configured yet

    Returns:
        Logger named ``splurge_geomrep.<module_name>``
    """
    root = logging.getLogger(_ROOT_LOGGER_NAME)
    if not root.handlers:
        setup_logging(log_level=log_level or _DEFAULT_LOG_LEVEL)
    return get_logger(f"{_ROOT_LOGGER_NAME}.{module_name}")


def get_logging_config() -> dict[str, Any]:
    """Get a copy of the current logging configuration."""
    return _LOGGING_CONFIG.copy()


def is_logging_configured() -> bool:
    """Check if logging has been configured."""
    return _LOGGING_CONFIGURED
