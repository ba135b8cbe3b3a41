"""
Command-line and file-format errors.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.errors.base_errors import ConfigFileError, OperationError


class CliError(OperationError):
    """Raised by the command layer."""


class CliArgumentError(CliError):
    """An option value is out of range or does not fit the input (bad --flag, --n outside [2, 12])."""


class CliFileError(CliError):
    """An input file is missing or an output file cannot be written."""


class CliExecutionError(CliError):
    """A command failed after its inputs were accepted."""


class ConfigParseError(ConfigFileError):
    """
    A config or element file does not follow its grammar.

    Context keys ``field``, ``line`` and ``column`` locate the problem and are
    appended to the message.
    """

    def __str__(self) -> str:
        where = self.location()
        return f"{self.message} ({where})" if where else self.message
