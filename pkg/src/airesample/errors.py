"""Exception hierarchy shared across the package."""


class AIResampleError(Exception):
    """Base class for all package errors."""


class SchemaError(AIResampleError):
    """A required column is missing or a column map is inconsistent."""


class ParseError(AIResampleError):
    """A CSV cell could not be converted; carries the 1-based data row."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class EmptyInputError(AIResampleError):
    pass


class ValidationError(AIResampleError):
    """A Dataset or config violates one of its invariants."""


class DomainError(AIResampleError, ValueError):
    pass


class UndefinedRatioError(AIResampleError):
    """Reference-group selection ratio is zero."""


class UndefinedAccuracyError(AIResampleError):
    pass


class InfeasibleError(AIResampleError):
    """A split, resample target or plan cannot be realized."""


class NoNeighborError(AIResampleError):
    pass


class DegenerateFitError(AIResampleError):
    """Training labels hold a single class for a model that needs two."""


class CalibrationError(AIResampleError):
    pass


class ConfigError(AIResampleError):
    pass
