"""Exception hierarchy shared by the engine and the command line."""


class QKError(Exception):
    """Base class for every error raised by this package."""


class InputError(QKError, ValueError):
    """A request violates a documented precondition."""


class ArityError(InputError):
    """Operands live in polynomial rings with different numbers of variables."""


class PoleError(QKError, ZeroDivisionError):
    """A denominator factor vanishes at the evaluation point."""


class InversionUnsupported(QKError):
    """``v -> 1/v`` does not give a function regular and vanishing at ``v = 0``."""


class InternalConsistencyError(QKError, AssertionError):
    """An identity that must hold by construction failed; indicates a bug."""


class VerificationFailure(QKError):
    """An oracle disagreed with the production path."""


class ModeError(InputError):
    """The request needs a computation mode that is not available for it."""
