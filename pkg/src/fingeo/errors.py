"""Exception hierarchy shared by every module.

The command line maps the three roots onto exit codes: ``ParameterError`` is a
bad request (2), ``BudgetExceeded`` means the work estimate is over the ceiling
(3), and ``VerificationFailed`` means a certificate did not check out (1).
"""


class FingeoError(Exception):
    """Base class for all package errors."""


class ParameterError(FingeoError, ValueError):
    """The inputs violate a documented precondition."""


class BudgetExceeded(FingeoError):
    """An exhaustive routine would exceed its operation ceiling."""


class VerificationFailed(FingeoError):
    """A construction did not pass its own verifier (an internal bug)."""


# finite fields
class NotPrime(ParameterError):
    pass


class OrderOverflow(ParameterError):
    pass


class FieldMismatch(ParameterError):
    pass


class DivisionByZero(ParameterError, ZeroDivisionError):
    pass


class NotSubfieldOrder(ParameterError):
    pass


# geometry
class DimensionMismatch(ParameterError):
    pass


class ZeroDirection(ParameterError):
    pass


# difference sets
class BadCongruence(ParameterError):
    pass


class TooLargeForExact(BudgetExceeded):
    pass


class NotPowerFree(ParameterError):
    pass


# integer polynomials
class BudgetInfeasible(ParameterError):
    pass


class IndexMismatch(ParameterError):
    pass


class SolveFailed(VerificationFailed):
    pass


# constructions
class NotIndependent(ParameterError):
    pass


class RangeViolation(ParameterError):
    pass


class CharTooSmall(ParameterError):
    pass


class FieldTooSmall(ParameterError):
    pass


class EvenCharacteristic(ParameterError):
    pass


class SubBoxEmpty(ParameterError):
    pass


# Nikodym sets and covers
class NotWeakNikodym(ParameterError):
    pass


class PrimeTooSmall(ParameterError):
    pass


class InvariantViolation(ParameterError):
    pass


class MissingWitness(ParameterError):
    pass


class NotACover(ParameterError):
    pass


class ParameterViolation(ParameterError):
    pass
