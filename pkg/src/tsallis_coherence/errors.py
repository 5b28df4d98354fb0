"""Exception hierarchy shared by every module."""


class CoherenceError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CoherenceError, ValueError):
    """An input violated a stated invariant.

    ``residual`` is the measured violation (e.g. the Hermiticity defect) when
    one is meaningful, otherwise ``None``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotHermitianError(ValidationError):
    pass


class TraceNotOneError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class NotNormalizedError(ValidationError):
    pass


class OutOfBlochDiskError(ValidationError):
    pass


class AlphaOutOfRangeError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class BadEnsembleError(ValidationError):
    pass


class SupportMismatchError(CoherenceError, ValueError):
    """A negative power of a singular reference state met nonzero weight."""


class NoConvergenceError(CoherenceError, RuntimeError):
    pass


class DegenerateIntervalError(CoherenceError, ValueError):
    pass


class ConstructionFailedError(CoherenceError, RuntimeError):
    pass


class IllConditionedBranchError(CoherenceError, ValueError):
    pass
