"""Exception hierarchy.

Every library error carries the process exit code the CLI maps it to.
"""


class LndError(Exception):
    exit_code = 5
    kind = "internal"


class UsageError(LndError):
    exit_code = 2
    kind = "usage"


class StructuralError(UsageError, ValueError):
    """Operands live in rings with different variable counts, or an index is out of range."""


class ParseError(UsageError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class PreconditionViolated(LndError):
    exit_code = 3
    kind = "precondition_violated"


class ResourceError(LndError):
    exit_code = 4
    kind = "resource"


class CertificationInconsistency(LndError):
    """A bounded search contradicted a certificate that was supposed to cover it."""

    exit_code = 5
    kind = "certification_inconsistency"


class InternalError(LndError):
    exit_code = 5
    kind = "internal"
