"""Exception hierarchy shared by every frialab module.

The CLI maps these onto process exit codes: DomainError and CapacityError
signal bad or unsupported inputs (exit 2), SolverError and NumericError
signal a computation that could not reach its tolerance (exit 3).
"""

from __future__ import annotations


class FrialabError(Exception):
    """Base class for all frialab errors."""


class DomainError(FrialabError):
    """An argument lies outside the mathematical domain of the operation."""


class CapacityError(FrialabError):
    """An exact computation would exceed the supported 64-bit integer range."""


class SolverError(FrialabError):
    """An iterative solver failed to converge; the message carries its trace."""


class NumericError(FrialabError):
    """A quadrature or finite-difference scheme could not reach tolerance."""
