"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonConvergenceError(ArithmeticError):
    """An adaptive computation hit its term cap before meeting its tolerance."""


class PoleError(ArithmeticError):
    """Evaluation requested at a pole of the expression."""


class DivergenceError(ArithmeticError):
    """A non-terminating series was requested outside its convergence region."""


class ZeroDenominatorError(ArithmeticError):
    """A series denominator factor vanished before the series terminated."""


class RootNotInIntervalError(ArithmeticError):
    """A computed root fell outside the interval that is known to bracket it."""
