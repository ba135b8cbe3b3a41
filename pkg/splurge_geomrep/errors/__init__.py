"""
Error handling package for splurge-geomrep.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.errors.base_errors import (
    SplurgeGeomrepError,
    ConfigurationError,
    ConfigValidationError,
    ConfigFileError,
    ValidationError,
    OperationError,
)
from splurge_geomrep.errors.algebra_errors import (
    AlgebraError,
    ShapeMismatchError,
    NotSelfAdjointError,
    NotUnitaryError,
    StateError,
    SubalgebraError,
)
from splurge_geomrep.errors.factorization_errors import (
    FactorizationError,
    SingularElementError,
    RankMismatchError,
    NotInParabolicError,
    FlagError,
    ChartError,
)
from splurge_geomrep.errors.cli_errors import (
    CliError,
    CliArgumentError,
    CliFileError,
    CliExecutionError,
    ConfigParseError,
)

__all__ = [
    # Base errors
    "SplurgeGeomrepError",
    "ConfigurationError",
    "ConfigValidationError",
    "ConfigFileError",
    "ValidationError",
    "OperationError",
    # Algebra errors
    "AlgebraError",
    "ShapeMismatchError",
    "NotSelfAdjointError",
    "NotUnitaryError",
    "StateError",
    "SubalgebraError",
    # Factorization errors
    "FactorizationError",
    "SingularElementError",
    "RankMismatchError",
    "NotInParabolicError",
    "FlagError",
    "ChartError",
    # CLI errors
    "CliError",
    "CliArgumentError",
    "CliFileError",
    "CliExecutionError",
    "ConfigParseError",
]
