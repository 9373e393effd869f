"""Exception hierarchy shared by all modules."""


class MonofreeError(Exception):
    """Base class for every error raised by the package."""


class ParseError(MonofreeError):
    """Malformed word / polynomial text or spec file."""


class PresentationError(MonofreeError):
    """A letter does not belong to the algebra presentation it is reduced in."""


class ClosureError(MonofreeError):
    """An operator sequence violates the monotone-closure coherence law."""


class SpecExhaustedError(MonofreeError):
    """A moment of higher order than a moment spec provides was requested."""


class NonStabilizedError(MonofreeError):
    """A truncated evaluation did not stabilize.

    ``values`` holds the disagreeing numbers keyed by truncation.
    """

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = dict(values or {})
