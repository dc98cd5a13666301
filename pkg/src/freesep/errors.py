"""Exception types shared by every module."""


class InvalidInputError(ValueError):
    """Malformed input: bad rank, out-of-range letter, rank mismatch, bad text."""


class PreconditionError(ValueError):
    """Input is well formed but violates an operation's precondition."""


class UndecidedError(RuntimeError):
    """A search hit its budget before reaching a decision."""

    def __init__(self, message, explored=None):
        super().__init__(message)
        self.explored = explored
