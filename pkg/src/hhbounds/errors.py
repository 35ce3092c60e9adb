"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HHError(Exception):
    """Base class for all errors raised by hhbounds."""


class DimensionError(HHError, ValueError):
    """Operands disagree in dimension, or a dimension limit is exceeded."""


class DomainError(HHError, ValueError):
    """An argument lies outside the admissible set (bad box, t outside [0,1], ...)."""


class BudgetExceededError(HHError):
    """The requested enumeration or quadrature grid is larger than the configured budget."""


class EvaluationError(HHError, ArithmeticError):
    """A function could not be evaluated (division by zero, sqrt of a negative, overflow)."""


class UnboundVariableError(EvaluationError):
    """An expression references a variable beyond the dimension of the point."""


class InconclusiveError(HHError):
    """A randomized check could not gather enough admissible samples."""


class WeightRejectedError(HHError):
    """A Fejér weight failed the symmetry/positivity screen.

    The falsifying verdict is kept on ``verdict`` so callers can report the witness.
    """

    def __init__(self, reason: str, verdict):
        super().__init__(f"weight falsified: {reason}")
        self.reason = reason
        self.verdict = verdict
