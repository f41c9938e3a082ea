"""Exception types. Every structural failure names a witness."""

from __future__ import annotations


class GerbekitError(Exception):
    """Base class; ``witness`` holds the offending tuple/arrow/object."""

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message}: {witness!r}")
        self.witness = witness


# -- validation failures (exit code 1) --------------------------------------

class NotAssociative(GerbekitError):
    pass


class NoUnit(GerbekitError):
    pass


class NoInverse(GerbekitError):
    pass


class NotAHomomorphism(GerbekitError):
    pass


class NotSubgroup(GerbekitError):
    pass


class NotNormal(GerbekitError):
    pass


class NotACover(GerbekitError):
    pass


class NotSurjective(GerbekitError):
    pass


class NotInjective(GerbekitError):
    pass


class NotExact(GerbekitError):
    pass


class NotMorita(GerbekitError):
    """A leg that must pass the Morita check did not."""


class InvariantViolation(GerbekitError):
    """Generic axiom failure found by a validation scan."""


class EmptyApex(GerbekitError):
    """Fiber product of two spans has no objects."""


class NotCentral(GerbekitError):
    pass


class NotAbelianKernel(GerbekitError):
    pass


class NoIsoFound(GerbekitError):
    pass


class InvalidCentralData(GerbekitError):
    pass


class NotInjectiveKernel(GerbekitError):
    pass


class MoritaMapNotInvertible(GerbekitError):
    pass


class NotACharacter(GerbekitError):
    pass


class InvalidCocycle(GerbekitError):
    pass


class AssociativityFailure(GerbekitError):
    pass


class DegreeOutOfRange(GerbekitError):
    pass


# -- resource limits (exit code 3) -------------------------------------------

class CapExceeded(GerbekitError):
    pass


class BudgetExceeded(GerbekitError):
    pass


class DimensionCapExceeded(GerbekitError):
    pass


# -- I/O (exit code 2) --------------------------------------------------------

class ParseError(GerbekitError):
    pass


LIMIT_ERRORS = (CapExceeded, BudgetExceeded, DimensionCapExceeded)
