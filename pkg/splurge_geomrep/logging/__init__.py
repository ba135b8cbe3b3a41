"""
Logging package for splurge-geomrep.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.logging.core import (
    setup_logging,
    get_logger,
    configure_module_logging,
    get_logging_config,
    is_logging_configured,
)
from splurge_geomrep.logging.context import (
    generate_run_id,
    set_run_id,
    get_run_id,
    clear_run_id,
    run_context,
    RunIdFilter,
)
from splurge_geomrep.logging.performance import (
    PerformanceLogger,
    TimingRecorder,
    performance_context,
)

__all__ = [
    # Core logging
    "setup_logging",
    "get_logger",
    "configure_module_logging",
    "get_logging_config",
    "is_logging_configured",
    # Run context
    "generate_run_id",
    "set_run_id",
    "get_run_id",
    "clear_run_id",
    "run_context",
    "RunIdFilter",
    # Performance monitoring
    "PerformanceLogger",
    "TimingRecorder",
    "performance_context",
]
