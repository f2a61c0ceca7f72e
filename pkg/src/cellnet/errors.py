"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: validation problems exit with 1,
guard refusals with 2 and broken internal invariants with 3.
"""


class CellNetError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(CellNetError, ValueError):
    """Input data is malformed or violates a documented precondition."""


class DomainError(ValidationError):
    """Sizes, arities or indices do not fit together."""


class StateError(CellNetError):
    """The object is not in the state the operation needs, e.g. an unclosed map set."""


class GuardError(CellNetError):
    """An exhaustive search was refused because the input exceeds its limit."""

    exit_code = 2


class InternalError(CellNetError):
    """A mathematical invariant that should always hold was found broken."""

    exit_code = 3


class DocumentError(ValidationError):
    """A network document could not be parsed; carries an optional location."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if path:
            where.append(path)
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
