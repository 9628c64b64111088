"""Exception hierarchy shared by every module.

The CLI maps each family to an exit code: configuration problems exit 2,
domain problems (u outside its range, degenerate parameters, poles) exit 3,
and accuracy failures (quadrature or series did not converge) exit 4.
"""


class RonkinZetaError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(RonkinZetaError, ValueError):
    """Invalid input shape, dimension mismatch or bad parameter type."""

    exit_code = 2


class DimensionError(ConfigError):
    pass


class StateError(ConfigError):
    """Operation not valid for the object's current state (e.g. already F-type)."""


class CapExceededError(ConfigError):
    pass


class UnsupportedDimensionError(ConfigError):
    pass


class InvalidSetError(ConfigError):
    """Signed coordinate set containing both x_i and -x_i."""


class DomainError(RonkinZetaError, ValueError):
    exit_code = 3


class DegeneracyError(DomainError):
    pass


class PoleError(DomainError):
    """A grid determinant vanished; ``k`` holds the offending momentum index."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class AccuracyError(RonkinZetaError, ArithmeticError):
    """Refinement cap reached before the requested tolerance."""

    exit_code = 4

    def __init__(self, message, evaluation=None):
        super().__init__(message)
        self.evaluation = evaluation
