"""Exception types raised across the package."""


class QDualError(Exception):
    """Base class for all package errors."""


class NonExpandablePole(QDualError):
    """A rational function has no power series expansion at the origin."""


class CapViolation(QDualError):
    """A substitution would leave the truncation caps meaningless."""


class NonTruncating(QDualError):
    """An infinite product does not reduce to finitely many factors below the caps."""


class PoleError(QDualError):
    """A zero factor survived in a denominator.

    Inside the vertex sums this is an alarm: every out-of-cone summand should
    vanish through a zero numerator factor instead.
    """


class LengthError(QDualError):
    """A partition or point has more parts than the number of variables."""


class CellOutOfRange(QDualError):
    """A cell does not belong to the Young diagram."""


class PreconditionError(QDualError):
    """Parameters outside the supported range (for example 2k > n)."""
