"""
Factorization error classes for splurge-geomrep.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.errors.base_errors import OperationError


class FactorizationError(OperationError):
    """Base exception for g = uq factorization failures."""

    pass


class SingularElementError(FactorizationError):
    """Exception raised when the element to factor is not invertible."""

    pass


class RankMismatchError(FactorizationError):
    """Exception raised when rank(r_j) differs from rank(e_j)."""

    pass


class NotInParabolicError(FactorizationError):
    """Exception raised when an element is not block-upper-triangular for the flag."""

    pass


class FlagError(FactorizationError):
    """Exception raised when flag projections are not an orthogonal resolution of the identity."""

    pass


class ChartError(FactorizationError):
    """Exception raised when a chart evaluation leaves the open cell."""

    pass
