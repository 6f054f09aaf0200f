"""Exception types shared across the package."""


class MagnonKerrError(Exception):
    """Base class for all package errors."""


class ArgumentError(MagnonKerrError, ValueError):
    """Invalid argument or violated precondition."""


class NumericalFailure(MagnonKerrError, ArithmeticError):
    """A linear-algebra routine failed or produced non-finite output."""


class InstabilityError(NumericalFailure):
    """The drift matrix is not Hurwitz, so no steady state exists."""


class AllPointsUnstable(MagnonKerrError):
    """Every point of a sweep was dynamically unstable."""
