"""Exception hierarchy.

Every error raised on invalid input derives from :class:`MrdpError`, which is
itself a :class:`ValueError`, so callers can catch either.
"""


class MrdpError(ValueError):
    """Base class for all package errors."""


class DuplicateLabel(MrdpError):
    pass


class TooShort(MrdpError):
    pass


class NotComonotonic(MrdpError):
    pass


class LengthMismatch(MrdpError):
    pass


class NonPositiveDelta(MrdpError):
    pass


class ChainMismatch(MrdpError):
    pass


class NotADistribution(MrdpError):
    pass


class InvalidPins(MrdpError):
    pass


class Infeasible(MrdpError):
    pass


class MaxIterationsExceeded(MrdpError):
    """Raised when the dual Newton loop stalls.

    The partial :class:`~mrdp.solver.SolveResult` is attached as ``result`` so
    that residual diagnostics survive the failure.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class TooLarge(MrdpError):
    pass


class NoFeasibleGridPoint(MrdpError):
    pass


class InvalidInstance(MrdpError):
    pass


class OutOfDomain(MrdpError):
    pass
