"""Exception classes shared across the package."""


class AlgebraError(Exception):
    """Base class for every error raised by lieaff."""


class DomainError(AlgebraError, ValueError):
    """Operands live in different rings/hosts, or have the wrong shape."""


class NotAUnitError(AlgebraError, ArithmeticError):
    pass


class UnsupportedError(AlgebraError):
    """The operation needs a finite ring or a chart representation."""


class ArityError(AlgebraError, ValueError):
    pass


class BudgetExceededError(AlgebraError):
    def __init__(self, message, budget=None, required=None):
        super().__init__(message)
        self.budget = budget
        self.required = required


class LawViolation(AlgebraError):
    """A structure was rejected because one of its laws failed.

    The failing :class:`~lieaff.engine.VerdictReport` is kept on ``verdict``.
    """

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class InternalConsistencyError(AlgebraError):
    """A theorem-backed check failed on lawful input: this is a bug, not a user error."""

    def __init__(self, message, verdict=None, context=None):
        super().__init__(message)
        self.verdict = verdict
        self.context = context


class DocumentError(AlgebraError, ValueError):
    """Malformed instance document; ``location`` is a JSON-pointer-like path."""

    def __init__(self, message, location=""):
        super().__init__(f"{location or '/'}: {message}")
        self.location = location
