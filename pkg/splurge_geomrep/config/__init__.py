"""
Configuration management package for splurge-geomrep.

Provides experiment configs loaded from JSON, tolerance profiles and
logging configuration.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.config.experiment_config import (
    AlgebraSection,
    ExperimentConfig,
    SampleSection,
    StateSection,
    SubalgebraSection,
    list_shipped_configs,
)
from splurge_geomrep.config.logging_config import (
    LoggingConfig,
    LogLevel,
    LogFormat,
)
from splurge_geomrep.config.tolerance_config import (
    ToleranceProfile,
    available_profiles,
    resolve_profile_name,
)

__all__ = [
    "AlgebraSection",
    "ExperimentConfig",
    "SampleSection",
    "StateSection",
    "SubalgebraSection",
    "list_shipped_configs",
    "LoggingConfig",
    "LogLevel",
    "LogFormat",
    "ToleranceProfile",
    "available_profiles",
    "resolve_profile_name",
]
