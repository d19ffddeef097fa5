"""Exception types raised across the package."""


class NearToeplitzError(Exception):
    """Base class for all package errors."""


class UnsupportedRegime(NearToeplitzError, ValueError):
    """The Toeplitz part is not strictly diagonally dominant (|b| <= 2)."""


class GammaOverflow(NearToeplitzError, OverflowError):
    """A raw gamma value exceeds double precision range."""


class IndexOutOfRange(NearToeplitzError, IndexError):
    pass


class SingularMatrix(NearToeplitzError, ArithmeticError):
    """The matrix is singular, or too close to a singular corner value."""


class CaseOutOfScope(NearToeplitzError, ValueError):
    """No closed-form result covers the requested (b, b_tilde) pair."""


class Diverged(NearToeplitzError, RuntimeError):
    pass


class UnboundedRange(NearToeplitzError, ValueError):
    pass
