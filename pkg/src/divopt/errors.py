"""Shared exception types."""


class DivoptError(Exception):
    """Base class for all package errors."""


class ValidationError(DivoptError, ValueError):
    """An input value violates a documented invariant."""


class DataFormatError(DivoptError, ValueError):
    """A scenario file could not be parsed; message carries the location."""


class ScaleError(DivoptError, ValueError):
    """A rescaling term is undefined (zero or near-zero denominator)."""


class InfeasibleError(DivoptError, ValueError):
    """The constraint set admits no feasible portfolio."""
