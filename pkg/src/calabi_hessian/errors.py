"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    """An argument lies outside the documented range of an operation."""


class ConeViolation(ValueError):
    """A vector is required to lie in an admissible cone but does not."""


class SingularInput(ValueError):
    """Eigenvalue data requested at x = 0 without the limiting slope."""


class DegenerateClass(ArithmeticError):
    """The pairing of the lower power of the class vanishes, so mu is undefined."""


class SeedNotFound(RuntimeError):
    """No admissible starting branch exists at the singular endpoint x = 0."""


class RetryWithSmallerEpsilon(RuntimeError):
    """The seeding chain lost monotonicity at the chosen start abscissa."""


class OracleBreakdown(RuntimeError):
    """The explicit slope formula hit a non-positive denominator."""
