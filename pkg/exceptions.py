"""Error types for the singularity Hodge-level toolkit.

Every error raised on purpose carries the exit code the CLI reports for it.
"""

from typing import Optional


class SingularityToolError(Exception):
    """Base class for expected failures."""

    exit_code = 3


class InputError(SingularityToolError):
    """Bad user input: syntax, weights, flags."""

    exit_code = 1


class PolynomialParseError(InputError):
    """Polynomial text does not follow the grammar."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class WeightValidationError(InputError):
    """A weight system is malformed or has the wrong length."""


class UnderdeterminedWeightsError(InputError):
    """The weight equations have more than one solution."""


class TruncationError(InputError):
    """A filtration request lies outside the configured cutoffs."""


class NotSemiQuasihomogeneousError(SingularityToolError):
    """Input is neither quasihomogeneous nor semiquasihomogeneous."""

    exit_code = 2


class NonIsolatedSingularityError(SingularityToolError):
    """The principal part does not have an isolated singularity."""

    exit_code = 2


class InconsistencyError(SingularityToolError):
    """Two independent computations disagree."""

    exit_code = 3


class DimensionMismatchError(ValueError):
    """Vectors or matrices of incompatible shapes."""
