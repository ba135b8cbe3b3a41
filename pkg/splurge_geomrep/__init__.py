"""
splurge-geomrep package.

Finite-dimensional GNS representations, conditional expectations, the
homogeneous bundle with its reproducing kernel, the realization operator and
the unitary × block-triangular factorization, each with residual checks.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.algebra_core import (
    AlgebraElement,
    AlgebraSpec,
    Functional,
    centralizer,
    commutant,
    haar_unitary,
    spectral_decompose,
    theta_tau,
    trace_tau,
)
from splurge_geomrep.bundle_kernel import (
    FiberVector,
    KernelOperator,
    RkhsData,
    fiber_equal,
    group_act,
    kernel_eval,
    kernel_gram,
    realization_iota,
)
from splurge_geomrep.config import (
    ExperimentConfig,
    LoggingConfig,
    LogLevel,
    LogFormat,
    ToleranceProfile,
)
from splurge_geomrep.errors import (
    SplurgeGeomrepError,
    ConfigurationError,
    ConfigValidationError,
    ConfigFileError,
    ValidationError,
    OperationError,
    # Algebra errors
    AlgebraError,
    ShapeMismatchError,
    NotSelfAdjointError,
    NotUnitaryError,
    StateError,
    SubalgebraError,
    # Factorization errors
    FactorizationError,
    SingularElementError,
    RankMismatchError,
    NotInParabolicError,
    FlagError,
    ChartError,
    # CLI errors
    CliError,
    CliArgumentError,
    CliFileError,
    CliExecutionError,
    ConfigParseError,
)
from splurge_geomrep.factorization import (
    FactorizationResult,
    Flag,
    member_of_P,
    rho_tilde,
    uq_factorize,
)
from splurge_geomrep.gns import (
    CondExpectation,
    GnsData,
    State,
    SubGnsData,
    centralizer_expectation,
    gns_build,
    sub_gns,
)
from splurge_geomrep.logging import (
    setup_logging,
    get_logger,
    configure_module_logging,
)
from splurge_geomrep.result_models import CheckResult, CheckStatus, Report

__version__ = "0.1.0"

__all__ = [
    # Algebra
    "AlgebraElement",
    "AlgebraSpec",
    "Functional",
    "centralizer",
    "commutant",
    "haar_unitary",
    "spectral_decompose",
    "theta_tau",
    "trace_tau",
    # GNS
    "CondExpectation",
    "GnsData",
    "State",
    "SubGnsData",
    "centralizer_expectation",
    "gns_build",
    "sub_gns",
    # Bundle and kernel
    "FiberVector",
    "KernelOperator",
    "RkhsData",
    "fiber_equal",
    "group_act",
    "kernel_eval",
    "kernel_gram",
    "realization_iota",
    # Factorization
    "FactorizationResult",
    "Flag",
    "member_of_P",
    "rho_tilde",
    "uq_factorize",
    # Reports
    "CheckResult",
    "CheckStatus",
    "Report",
    # Configuration
    "ExperimentConfig",
    "LoggingConfig",
    "LogLevel",
    "LogFormat",
    "ToleranceProfile",
    # Errors
    "SplurgeGeomrepError",
    "ConfigurationError",
    "ConfigValidationError",
    "ConfigFileError",
    "ValidationError",
    "OperationError",
    "AlgebraError",
    "ShapeMismatchError",
    "NotSelfAdjointError",
    "NotUnitaryError",
    "StateError",
    "SubalgebraError",
    "FactorizationError",
    "SingularElementError",
    "RankMismatchError",
    "NotInParabolicError",
    "FlagError",
    "ChartError",
    "CliError",
    "CliArgumentError",
    "CliFileError",
    "CliExecutionError",
    "ConfigParseError",
    # Logging
    "setup_logging",
    "get_logger",
    "configure_module_logging",
]
