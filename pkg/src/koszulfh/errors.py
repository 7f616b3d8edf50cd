"""Exception types shared across the package."""


class MalformedInputError(ValueError):
    """Raised when an object or argument violates a structural precondition."""


class PositivityError(MalformedInputError):
    """Raised when a construction needs a degree bound the input does not satisfy.

    ``degrees`` lists the offending degrees so callers can report them.
    """

    def __init__(self, message, degrees=()):
        super().__init__(message)
        self.degrees = tuple(degrees)
