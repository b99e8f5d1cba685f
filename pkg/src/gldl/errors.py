"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GldlError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(GldlError, ValueError):
    pass


class NonPrime(GldlError, ValueError):
    pass


class DegreeOverflow(GldlError, ValueError):
    """An enumeration would exceed the configured element bound."""


class OrderOverflow(GldlError, ValueError):
    """A group enumeration would exceed the configured order bound."""


class ZeroElement(GldlError, ZeroDivisionError):
    pass


class NotCoprime(GldlError, ValueError):
    pass


class EllEqualsP(GldlError, ValueError):
    pass


class Singular(GldlError, ZeroDivisionError):
    pass


class NonAdditiveExpansion(GldlError, ArithmeticError):
    """The product expansion produced a non-q-power monomial (arithmetic bug)."""


class SingularMoore(GldlError, ZeroDivisionError):
    pass


class NotOnVariety(GldlError, ValueError):
    pass


class StabilizerViolation(GldlError, AssertionError):
    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class LadderExhausted(GldlError, RuntimeError):
    pass


class FiberSizeMismatch(GldlError, AssertionError):
    pass


class NotUnitriangular(GldlError, ValueError):
    pass


class MembershipViolation(GldlError, ValueError):
    pass


class NonTermination(GldlError, RuntimeError):
    pass


class CompanionMismatch(GldlError, AssertionError):
    def __init__(self, message: str, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class TruncationTooSmall(GldlError, ValueError):
    pass


class IdentityFailure(GldlError, AssertionError):
    pass
