"""Exception types raised across the package.

Input and usage problems derive from :class:`ValueError`; loss of numerical
definiteness or non-convergence derive from :class:`NumericalError`.
"""


class LogMinorError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(LogMinorError, ArithmeticError):
    """A computation failed for numerical reasons."""


class UsageError(LogMinorError, ValueError):
    """Invalid arguments or inputs."""


# core linear algebra
class NotSquare(UsageError):
    pass


class NotFinite(UsageError):
    pass


class NotSymmetric(UsageError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class IndexOutOfRange(UsageError):
    pass


class CholeskyBreakdown(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


# generators
class OddDimension(UsageError):
    pass


class KappaNotAboveOne(UsageError):
    pass


class DegreesOfFreedomTooSmall(UsageError):
    pass


class BadSplit(UsageError):
    pass


# sampling
class KTooLarge(UsageError):
    pass


class KappaHatTooSmall(UsageError):
    pass


class NegativeR(UsageError):
    pass


class EmptyDistribution(UsageError):
    pass


# exact enumeration
class TooManySubsets(UsageError):
    pass


class BadArguments(UsageError):
    pass


# bounds
class KEqualsN(UsageError):
    pass


class NotDiagonal(UsageError):
    pass


class NonpositiveR(UsageError):
    pass


class EllZero(UsageError):
    pass


class UnattainableTarget(UsageError):
    pass


class LengthMismatch(UsageError):
    pass
