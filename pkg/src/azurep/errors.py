"""Exception hierarchy shared by every module.

The workbench maps these onto report statuses and exit codes, so library code
raises them instead of bare ``ValueError``.
"""


class AzurepError(Exception):
    """Base class for all library errors."""


class InputError(AzurepError, ValueError):
    """Malformed or inconsistent input (a caller mistake)."""


class PreconditionError(AzurepError):
    """Input is well formed but violates a mathematical precondition."""


class RetryError(PreconditionError):
    """A randomized search exhausted its attempt budget."""


class BudgetExceeded(AzurepError):
    """An exhaustive enumeration would exceed its explicit budget."""

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: needs {required} evaluations, budget is {budget}")


class PropertyViolation(AzurepError):
    """An internal consistency check failed; carries the offending values."""

    def __init__(self, message: str, *, expected=None, actual=None):
        self.expected = expected
        self.actual = actual
        super().__init__(message)
