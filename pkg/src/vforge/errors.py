"""Exception hierarchy shared by every vforge module."""


class VforgeError(ValueError):
    pass


class LevelOutOfRange(VforgeError):
    pass


class DomainError(VforgeError):
    pass


class NotInCarrier(VforgeError):
    pass


class ThresholdOrder(VforgeError):
    pass


class RegionMismatch(VforgeError):
    pass


class UnknownConstruction(VforgeError):
    pass


class SequenceOutOfRegion(VforgeError):
    pass


class RationalParseError(VforgeError):
    pass


class Undecided(VforgeError):
    """Raised when an oracle cannot settle a question within ``depth`` steps."""

    def __init__(self, depth: int, message: str = ""):
        super().__init__(message or f"undecided at depth {depth}")
        self.depth = depth
