"""Exception types raised across qfid.

Every validation error carries the measured residual so callers (and the CLI)
can report by how much an invariant was missed.
"""


class QfidError(ValueError):
    """Base class for all qfid errors."""


class ValidationError(QfidError):
    """An input violates a mathematical invariant."""

    invariant = "invariant"

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NotHermitian(ValidationError):
    invariant = "hermitian"


class TraceNotOne(ValidationError):
    invariant = "unit trace"


class NotPSD(ValidationError):
    invariant = "positive semidefinite"


class NotPure(ValidationError):
    invariant = "pure (rank-1 projector)"


class OutsideBlochBall(ValidationError):
    invariant = "inside Bloch ball"


class NotUnitary(ValidationError):
    invariant = "unitary"


class NotTracePreserving(ValidationError):
    invariant = "trace preserving"


class NotCPTP(ValidationError):
    invariant = "completely positive"


class ParamOutOfRange(ValidationError):
    invariant = "parameter range"


class UnknownPreset(QfidError):
    pass


class SpecParseError(QfidError):
    """A channel/target spec could not be parsed.

    ``source`` is the file name (or ``<inline>``), ``line`` the 1-based line
    when known, and ``field`` the dotted path of the offending field.
    """

    def __init__(self, message: str, source: str = "<inline>",
                 line: int | None = None, field: str | None = None):
        where = source
        if line is not None:
            where += f":{line}"
        if field:
            where += f" [{field}]"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.field = field
