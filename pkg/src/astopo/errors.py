"""Exception types shared across the toolkit."""


class AstopoError(Exception):
    """Base class for all toolkit errors."""


class EmptyInputError(AstopoError, ValueError):
    """Raised when an operation receives no usable data."""


class DataFormatError(AstopoError, ValueError):
    """Raised for malformed input files (edge lists, indexes, value files)."""


class DisconnectedGraphError(AstopoError, ValueError):
    """Raised when a path-based measure is applied to a disconnected graph.

    Extract the largest connected component first.
    """


class UndefinedValueError(AstopoError, ArithmeticError):
    """Raised when a measure is mathematically undefined for the input
    (e.g. degree assortativity of a regular graph)."""


class ConvergenceError(AstopoError, RuntimeError):
    """Raised when an iterative solver fails to converge.

    Carries the last iterate and the iteration count.
    """

    def __init__(self, message, iterate=None, iterations=None):
        super().__init__(message)
        self.iterate = iterate
        self.iterations = iterations


class ConfigError(AstopoError, ValueError):
    """Raised for invalid configuration or parameters, before any work runs."""


class GenerationError(AstopoError, RuntimeError):
    """Raised when a topology generator cannot complete a step."""
