"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class NsfdError(Exception):
    """Base class for all numerical and configuration failures."""


class EmptyGrid(NsfdError, ValueError):
    pass


class BracketNotFound(NsfdError):
    pass


class NoSignChange(NsfdError):
    pass


class NonpositiveDenominator(NsfdError, ArithmeticError):
    """A denominator of the explicit NSFD map was <= 0 at the given state."""

    def __init__(self, message: str, state=None, index: int | None = None):
        super().__init__(message)
        self.state = state
        self.index = index

    def with_index(self, index: int) -> "NonpositiveDenominator":
        return NonpositiveDenominator(f"step {index}: {self}", self.state, index)


class MissingEquilibrium(NsfdError):
    pass


class AmbiguousRegime(NsfdError):
    pass


class NotAFixedPoint(NsfdError):
    pass


class InfeasibleScheme(NsfdError):
    pass


class DecreaseViolated(NsfdError):
    def __init__(self, message: str, index: int, state, delta_v: float):
        super().__init__(message)
        self.index = index
        self.state = state
        self.delta_v = delta_v


class NonFiniteValue(NsfdError, ArithmeticError):
    pass


class ReferenceUnstable(NsfdError):
    pass


class ConfigError(NsfdError, ValueError):
    pass
