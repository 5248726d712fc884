"""Exception hierarchy shared across the package."""


class GraphKMSError(Exception):
    """Base class for all errors raised by graphkms."""


class MemberNotInSpace(GraphKMSError):
    pass


class CoverIncomplete(GraphKMSError):
    pass


class IncompatibleSections(GraphKMSError):
    """Local measures disagree on an overlap; carries the witnessing point."""

    def __init__(self, point, piece_a, piece_b):
        self.point = point
        self.piece_a = piece_a
        self.piece_b = piece_b
        super().__init__(
            f"local measures disagree at {point!r} (pieces {piece_a} and {piece_b})"
        )


class IndexOutOfRange(GraphKMSError):
    pass


class NotComposable(GraphKMSError):
    pass


class WindowRuleMissing(GraphKMSError):
    pass


class NonPrimitiveCycle(GraphKMSError):
    pass


class DepthMismatch(GraphKMSError):
    pass


class ShiftOfVertex(GraphKMSError):
    pass


class MixedLengthBase(GraphKMSError):
    pass


class WindowTooSmall(GraphKMSError):
    pass


class ExactModeUnavailable(GraphKMSError):
    pass


class NotSubInvariant(GraphKMSError):
    pass


class ConsistencyFailure(GraphKMSError):
    """A tower certificate failed.  Signals an internal bug, never expected."""


class DepthExceeded(GraphKMSError):
    pass


class SchemaViolation(GraphKMSError):
    pass
