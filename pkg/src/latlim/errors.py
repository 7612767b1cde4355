"""Exception types raised across the package."""


class LatlimError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(LatlimError, ValueError):
    pass


class SupportTooLarge(LatlimError):
    """Raised when a box has more vertices than the caller's cap allows."""

    def __init__(self, support_size, cap):
        self.support_size = support_size
        self.cap = cap
        super().__init__(f"2^{support_size} vertices exceed cap {cap}; use sampled mode")


class Unbounded(LatlimError):
    pass


class PreconditionViolated(LatlimError, ValueError):
    pass


class EmptyPeriod(LatlimError, ValueError):
    pass


class BadIndices(LatlimError, ValueError):
    pass


class UnsupportedNorm(LatlimError, ValueError):
    pass


class NotMatrixKind(LatlimError, TypeError):
    pass


class SquareNotCommuting(LatlimError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class DifferentSystems(LatlimError, ValueError):
    pass


class NoCommonIndex(LatlimError):
    pass


class NotContractive(LatlimError):
    pass


class ConeIncompatible(LatlimError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EdgesNotZero(LatlimError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotRepresentable(LatlimError, ValueError):
    pass


class UnknownExample(LatlimError, KeyError):
    pass


class InconsistencyError(LatlimError, AssertionError):
    """Two checkers that must agree on an input returned different answers.

    This always indicates a bug in the package, never a property of the input.
    """

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or {}


class ParseError(LatlimError, ValueError):
    pass
