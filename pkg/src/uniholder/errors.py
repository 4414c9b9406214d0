"""Exception hierarchy shared by the library and the CLI."""


class HolderError(Exception):
    """Base class for library errors."""


class DomainError(HolderError, ValueError):
    """An input lies outside the domain an operation accepts."""


class EstimationError(HolderError):
    """A fit could not be formed, typically because every scale is zero."""


class AccuracyError(HolderError):
    """A numerical resolution requirement is not met."""


class TruncationError(HolderError):
    """A construction cannot be carried out to the requested depth.

    Attributes
    ----------
    feasible : int
        The deepest truncation that can be honoured.
    """

    def __init__(self, message, feasible):
        super().__init__(message)
        self.feasible = feasible
