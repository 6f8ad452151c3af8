"""
Error hierarchy for QOsc
"""


class QOscError(Exception):
    """Base class for all library errors"""


class ParameterError(QOscError, ValueError):
    """Invalid deformation or truncation parameters"""


class DomainError(QOscError, ValueError):
    """Argument outside the domain of a function (e.g. |z|² ≥ R)"""


class RegimeError(QOscError, ValueError):
    """Operation not defined for the parameter regime (q < 1 vs q > 1)"""


class PoleError(QOscError, ZeroDivisionError):
    """A denominator factor of a q-series vanishes"""


class ConvergenceError(QOscError, ArithmeticError):
    """A series or quadrature failed its convergence criterion"""


class QuadratureBudgetError(ConvergenceError):
    """Integrand evaluation budget exhausted"""


class TruncationError(QOscError, IndexError):
    """Truncated Fock space too small for the requested entries"""


class NotStableYet(QOscError):
    """Internal signal for adaptive refinement loops"""
