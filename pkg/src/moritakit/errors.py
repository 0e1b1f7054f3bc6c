"""Exception hierarchy shared by every module."""


class MoritaKitError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(MoritaKitError, ValueError):
    """Malformed data: unknown atoms, letters outside an alphabet, bad JSON."""


class PreconditionError(MoritaKitError):
    """An operation was called on data that does not satisfy its hypotheses."""


class CapacityError(MoritaKitError):
    """A configured size or word-length bound would be exceeded."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class ClosureViolationError(MoritaKitError):
    """A computed element fell outside the family that should contain it."""
