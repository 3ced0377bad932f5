"""Exception hierarchy.  The CLI maps each class to an exit code."""


class NetidentError(Exception):
    """Base class for all library errors."""


class InputError(NetidentError, ValueError):
    """Malformed graph, vertex set or document."""


class PreconditionError(NetidentError):
    """An operation was called outside its domain (e.g. non-square case)."""


class ArithmeticDomainError(NetidentError, ArithmeticError):
    """Division by zero or evaluation at a pole."""


class SingularMatrixError(ArithmeticDomainError):
    pass


class BudgetExceededError(NetidentError):
    """Constrained-path enumeration would exceed the configured budget."""


class ConstructionFailedError(NetidentError):
    """Counterexample construction ran out of resamples."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InternalConsistencyError(NetidentError):
    """A certificate failed its own audit; indicates a bug, never returned silently."""


class CriteriaDisagreement(NetidentError, AssertionError):
    """Two characterisations that must agree did not."""
