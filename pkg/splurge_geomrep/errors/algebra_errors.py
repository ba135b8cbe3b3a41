"""
Algebra and state error classes for splurge-geomrep.

Raised when an input element, state or subalgebra violates the
preconditions of an operation.

Copyright (c) 2025, Jim Schilling

This module is licensed under the MIT License.
"""

from splurge_geomrep.errors.base_errors import ValidationError


class AlgebraError(ValidationError):
    """Base exception for algebra-related input errors."""

    pass


class ShapeMismatchError(AlgebraError):
    """Exception raised when element blocks do not match the algebra spec."""

    pass


class NotSelfAdjointError(AlgebraError):
    """Exception raised when a self-adjoint element is required."""

    pass


class NotUnitaryError(AlgebraError):
    """Exception raised when a unitary element is required."""

    pass


class StateError(AlgebraError):
    """Exception raised when a density is not positive or not normalized."""

    pass


class SubalgebraError(AlgebraError):
    """Exception raised when a basis does not span a unital *-subalgebra."""

    pass
