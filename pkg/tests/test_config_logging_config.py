"""
Unit tests for logging configuration module.

Tests the LogLevel, LogFormat, and LoggingConfig classes and applying a section.
"""

import os
from pathlib import Path

import pytest

from splurge_geomrep.config.logging_config import LogFormat, LoggingConfig, LogLevel
from splurge_geomrep.errors import ConfigValidationError
from splurge_geomrep.logging import get_logging_config


class TestLogLevel:
    """Test LogLevel enum."""

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["debug", "INFO", "Warning", "error", "CRITICAL"])
    def test_from_string_case_insensitive(self, text: str) -> None:
        """Level names parse regardless of case."""
        assert LogLevel.from_string(text).value == text.upper()

    @pytest.mark.unit
    def test_from_string_invalid_level_defaults_to_warning(self) -> None:
        """Unknown names fall back to WARNING."""
        assert LogLevel.from_string("chatty") == LogLevel.WARNING


class TestLogFormat:
    """Test LogFormat enum."""

    @pytest.mark.unit
    def test_from_string(self) -> None:
        """TEXT and JSON parse; anything else is TEXT."""
        assert LogFormat.from_string("json") == LogFormat.JSON
        assert LogFormat.from_string("Text") == LogFormat.TEXT
        assert LogFormat.from_string("xml") == LogFormat.TEXT


class TestLoggingConfig:
    """Test LoggingConfig dataclass."""

    @pytest.mark.unit
    def test_default_initialization(self) -> None:
        """Defaults log warnings to the console only."""
        config = LoggingConfig()

        assert config.level == LogLevel.WARNING
        assert config.format == LogFormat.TEXT
        assert config.enable_console is True
        assert config.enable_file is False
        assert config.backup_count == 7
        assert config.get_log_file_path() is None
        assert not config.is_json_format

    @pytest.mark.unit
    def test_negative_backup_count_raises_error(self) -> None:
        """Negative backup counts are rejected."""
        with pytest.raises(ConfigValidationError, match="Backup count must be non-negative"):
            LoggingConfig(backup_count=-1)

    @pytest.mark.unit
    def test_enable_file_without_log_file_or_dir_raises_error(self) -> None:
        """File logging needs a destination."""
        with pytest.raises(ConfigValidationError) as exc_info:
            LoggingConfig(enable_file=True)
        assert exc_info.value.get_context("field") == "logging.enable_file"

    @pytest.mark.unit
    def test_get_log_file_path(self) -> None:
        """An explicit file wins over a directory."""
        assert LoggingConfig(enable_file=True, log_file="run.log").get_log_file_path() == "run.log"
        assert LoggingConfig(enable_file=True, log_dir="logs").get_log_file_path() == os.path.join(
            "logs", "splurge_geomrep.log"
        )
        both = LoggingConfig(enable_file=True, log_file="run.log", log_dir="logs")
        assert both.get_log_file_path() == "run.log"

    @pytest.mark.unit
    def test_from_dict_with_custom_values(self) -> None:
        """Every key is read."""
        config = LoggingConfig.from_dict(
            {
                "level": "debug",
                "format": "json",
                "enable_console": False,
                "enable_file": True,
                "log_dir": "logs",
                "backup_count": 3,
            }
        )

        assert config.level == LogLevel.DEBUG
        assert config.is_json_format
        assert config.enable_console is False
        assert config.backup_count == 3

    @pytest.mark.unit
    def test_from_dict_with_defaults(self) -> None:
        """An empty section gives the defaults."""
        assert LoggingConfig.from_dict({}) == LoggingConfig()

    @pytest.mark.unit
    def test_round_trip_dict_conversion(self) -> None:
        """to_dict output reloads to an equal config."""
        config = LoggingConfig(level=LogLevel.ERROR, format=LogFormat.JSON, enable_file=True, log_file="x.log")
        data = config.to_dict()

        assert data["level"] == "ERROR"
        assert data["format"] == "JSON"
        assert LoggingConfig.from_dict(data) == config


class TestLoggingConfigApply:
    """Test applying a logging section."""

    @pytest.mark.unit
    def test_apply_file_section(self, tmp_path: Path) -> None:
        """File settings reach the package logger setup."""
        log_file = tmp_path / "logs" / "run.log"
        config = LoggingConfig(level=LogLevel.INFO, format=LogFormat.JSON, enable_file=True, log_file=str(log_file))

        config.apply()

        applied = get_logging_config()
        assert applied["log_level"] == "INFO"
        assert applied["log_file"] == str(log_file)
        assert applied["enable_json"] is True
        assert log_file.parent.is_dir()

    @pytest.mark.unit
    def test_apply_level_override(self) -> None:
        """An explicit level wins over the section."""
        LoggingConfig(level=LogLevel.ERROR).apply("debug")
        assert get_logging_config()["log_level"] == "DEBUG"

    @pytest.mark.unit
    def test_file_path_ignored_unless_enabled(self) -> None:
        """log_dir alone does not turn on file logging."""
        LoggingConfig(log_dir="unused").apply()
        assert get_logging_config()["log_file"] is None

    @pytest.mark.unit
    def test_apply_invalid_override(self) -> None:
        """Unknown override levels are rejected."""
        with pytest.raises(ConfigValidationError):
            LoggingConfig().apply("loud")
