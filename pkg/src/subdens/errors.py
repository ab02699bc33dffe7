"""Exception hierarchy shared by all subdens modules."""


class SubdensError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SubdensError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (e.g. gamma at 0, -1, -2, ...)."""


class StripError(DomainError):
    """Mellin abscissa outside the analyticity strip of the transform."""


class NonConvergenceError(SubdensError, ArithmeticError):
    """A series did not meet its tolerance within the term cap."""


class QuadratureError(SubdensError, ArithmeticError):
    """A numerical quadrature / contour inversion failed its convergence check."""


class EfficiencyError(SubdensError, RuntimeError):
    """A rejection sampler would run at an unusable acceptance rate."""
