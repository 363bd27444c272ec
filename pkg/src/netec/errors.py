"""Exception hierarchy shared by all netec modules."""


class NetecError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NetecError, ValueError):
    """Malformed input: bad field, bad network file, inconsistent code spec."""


class FieldError(ValidationError):
    pass


class NetworkError(ValidationError):
    pass


class InfeasibleError(NetecError):
    """The requested object does not exist (or could not be found) for these inputs."""


class FieldTooSmallError(InfeasibleError):
    """A construction step failed because the field has too few elements.

    ``required_q`` carries a field size that is sufficient by the relevant
    counting argument, when one is known.
    """

    def __init__(self, message, required_q=None):
        super().__init__(message)
        self.required_q = required_q


class BudgetExceededError(NetecError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, message, spent=0, limit=0):
        super().__init__(message)
        self.spent = spent
        self.limit = limit


class InvariantError(NetecError, AssertionError):
    """An internal consistency property failed; indicates a bug or a broken precondition."""
