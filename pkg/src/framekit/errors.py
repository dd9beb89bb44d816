"""Exception types raised across framekit."""


class FramekitError(Exception):
    """Base class; ``code`` is a stable machine-readable tag."""

    code = "FramekitError"


class NotPrime(FramekitError, ValueError):
    code = "NotPrime"


class NotPrimePower(FramekitError, ValueError):
    code = "NotPrimePower"


class Overflow(FramekitError, ValueError):
    code = "Overflow"


class FieldCapExceeded(Overflow):
    code = "FieldCapExceeded"


class DegreeMismatch(FramekitError, ValueError):
    code = "DegreeMismatch"


class NotPrimitive(FramekitError, ValueError):
    code = "NotPrimitive"


class SearchBudgetExceeded(FramekitError, RuntimeError):
    code = "SearchBudgetExceeded"


class DuplicateExponents(FramekitError, ValueError):
    code = "DuplicateExponents"


class NotFlat(FramekitError, ValueError):
    code = "NotFlat"

    def __init__(self, index, deviation):
        super().__init__(f"vector {index} is not flat (max deviation {deviation:.3e})")
        self.index = index
        self.deviation = deviation


class NotPicketFence(FramekitError, ValueError):
    code = "NotPicketFence"


class TooManyRemoved(FramekitError, ValueError):
    code = "TooManyRemoved"


class TooFewVectors(FramekitError, ValueError):
    code = "TooFewVectors"


class DimMismatch(FramekitError, ValueError):
    code = "DimMismatch"


class DimTooLarge(FramekitError, ValueError):
    code = "DimTooLarge"


class ShapeMismatch(FramekitError, ValueError):
    code = "ShapeMismatch"


class PrereqFailed(FramekitError, ValueError):
    code = "PrereqFailed"
