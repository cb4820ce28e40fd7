class SetcongError(Exception):
    """Base class for all library errors."""


class LimitExceeded(SetcongError):
    pass


class ArityMismatch(SetcongError):
    pass


class NonCanonicalElement(SetcongError):
    pass


class EmptyFamily(SetcongError):
    pass


class PreconditionFailed(SetcongError):
    pass


class BudgetExceeded(SetcongError):
    pass


class IdentityInput(SetcongError):
    pass


class PointCollision(SetcongError):
    pass


class FallbacksExhausted(SetcongError):
    pass


class TooManyStatements(SetcongError):
    pass


class ImproperStatement(SetcongError):
    pass


class NotNumericallyConsistent(SetcongError):
    pass


class InconsistentEvidence(SetcongError):
    pass


class ParseError(SetcongError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class UnknownSetName(ParseError):
    pass


class IndexOutOfRange(ParseError):
    pass
