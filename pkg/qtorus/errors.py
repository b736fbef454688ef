"""
Errors

Exception hierarchy shared by every qtorus module.
"""

from typing import Optional


class QuantumTorusError(Exception):
    """Base exception for quantized torus computations."""
    pass


class ParameterMismatchError(QuantumTorusError):
    """Raised when operands carry different Planck parameters, θ points or N."""
    pass


class DimensionMismatchError(QuantumTorusError):
    """Raised when a sector matrix does not match the expected dimension."""

    def __init__(self, message: str, expected: Optional[int] = None, actual: Optional[int] = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ArgumentError(QuantumTorusError, ValueError):
    """Raised for out-of-range arguments (averaging lengths, grid sizes, truncations)."""
    pass


class NonUnitaryError(QuantumTorusError):
    """Raised when a propagator fails the unitarity check."""

    def __init__(self, message: str, defect: float):
        super().__init__(message)
        self.defect = defect


class ThetaDomainError(QuantumTorusError, ValueError):
    """Raised when the theta series is evaluated outside the upper half plane."""
    pass


class ThetaConvergenceError(QuantumTorusError):
    """Raised when the theta series cannot meet its tolerance within max_terms."""

    def __init__(self, message: str, achieved_bound: float, max_terms: int):
        super().__init__(message)
        self.achieved_bound = achieved_bound
        self.max_terms = max_terms


class UsageError(QuantumTorusError):
    """Raised by the command line for malformed or unknown flags."""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag


class ToleranceError(QuantumTorusError):
    """Raised by the command line when a numeric check exceeds its tolerance."""

    def __init__(self, message: str, deviation: float, tolerance: float):
        super().__init__(message)
        self.deviation = deviation
        self.tolerance = tolerance
