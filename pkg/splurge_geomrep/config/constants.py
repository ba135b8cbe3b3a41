"""
Configuration constants for splurge-geomrep.

Centralized location for numerical tolerances, sampling defaults and
CLI limits.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

# Numerical rank and clustering
DEFAULT_RANK_CUTOFF: float = 1e-10
DEFAULT_CLUSTER_TOL: float = 1e-8
DEFAULT_SELF_ADJOINT_TOL: float = 1e-10
DEFAULT_UNITARY_TOL: float = 1e-10
DEFAULT_PROJECTION_TOL: float = 1e-10
DEFAULT_STATE_TOL: float = 1e-10
DEFAULT_SUBALGEBRA_TOL: float = 1e-9
DEFAULT_FIBER_TOL: float = 1e-9
DEFAULT_PARABOLIC_TOL: float = 1e-9
DEFAULT_GRAM_CUTOFF: float = 1e-10
DEFAULT_CHECK_TOL: float = 1e-9

# Holomorphy stencil
DEFAULT_HOLOMORPHY_STEP: float = 1e-5
MIN_HOLOMORPHY_STEP: float = 1e-6
MAX_HOLOMORPHY_STEP: float = 1e-3
MIN_CONVERGENCE_ORDER: float = 1.8
MIN_CONTROL_RESIDUAL: float = 0.1
DEFAULT_MAX_CHART_DIRECTIONS: int = 16

# Sampling defaults
DEFAULT_SAMPLE_POINTS: int = 10
DEFAULT_SAMPLE_VECTORS: int = 20
DEFAULT_SAMPLE_UNITARIES: int = 8
DEFAULT_EXPECTATION_INPUTS: int = 100
DEFAULT_FACTORIZATIONS: int = 20
DEFAULT_KERNEL_PAIRS: int = 100

# CLI limits
MIN_BOREL_WEIL_N: int = 2
MAX_BOREL_WEIL_N: int = 12

# Exit codes
EXIT_OK: int = 0
EXIT_CHECK_FAILURE: int = 1
EXIT_USAGE_ERROR: int = 2

# Environment
TOLERANCE_PROFILE_ENV_VAR: str = "SPLURGE_GEOMREP_TOLERANCE_PROFILE"
DEFAULT_TOLERANCE_PROFILE: str = "default"

# Logging settings
DEFAULT_LOG_LEVEL: str = "WARNING"
DEFAULT_LOG_FORMAT: str = "TEXT"
