"""Error types carrying a stable machine-readable code."""


class BiaError(Exception):
    """Base class; ``code`` is the symbolic name reported by the CLI."""

    code = "ERROR"
    exit_code = 3

    def __init__(self, message=""):
        super().__init__(message or self.code)
        self.message = message or self.code

    def __str__(self):
        return f"{self.code}: {self.message}"


class DomainError(BiaError):
    code = "DOMAIN"
    exit_code = 3


class AsymmetricCells(DomainError):
    code = "ASYMMETRIC_CELLS"


class PatternOutOfRange(DomainError):
    code = "PATTERN_OUT_OF_RANGE"


class BudgetExceeded(DomainError):
    code = "BUDGET_EXCEEDED"


class NotIntegerCase(DomainError):
    code = "NOT_INTEGER_CASE"


class UnknownName(DomainError):
    code = "UNKNOWN_NAME"


class UnsupportedConfig(BiaError):
    code = "UNSUPPORTED_CONFIG"
    exit_code = 4


class UsageError(BiaError):
    code = "USAGE"
    exit_code = 2


class ParseError(BiaError):
    code = "PARSE_ERROR"
    exit_code = 2

    def __init__(self, message="", line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class SchemaVersionMismatch(ParseError):
    code = "SCHEMA_VERSION_MISMATCH"


class LpError(BiaError):
    code = "LP_ERROR"
