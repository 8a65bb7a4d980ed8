"""Exception hierarchy. Each error carries a stable machine-readable code."""


class ScopeforgeError(Exception):
    code = "error"
    exit_status = 2


class TopMismatch(ScopeforgeError):
    code = "top-mismatch"


class InconsistentStore(ScopeforgeError):
    code = "inconsistent-store"


class DuplicateIntro(ScopeforgeError):
    code = "duplicate-intro"


class NoMatchingClause(ScopeforgeError):
    code = "no-matching-clause"


class SchemaError(ScopeforgeError):
    code = "schema-error"
    exit_status = 3

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field


class FormatError(SchemaError):
    code = "format-error"


class InconsistentTemplate(SchemaError):
    code = "inconsistent-template"


class ValenceMismatch(ScopeforgeError):
    code = "valence-mismatch"
    exit_status = 1


class SaturationError(ValenceMismatch):
    code = "saturation-error"


class NoMatchingSlash(ValenceMismatch):
    code = "no-matching-slash"


class NoParse(ScopeforgeError):
    code = "no-parse"
    exit_status = 1

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotUnderspecified(ScopeforgeError):
    code = "not-underspecified"


class UnresolvedSlot(ScopeforgeError):
    code = "unresolved-slot"


class ScaleExceeded(ScopeforgeError):
    code = "scale-exceeded"


class ModelError(SchemaError):
    code = "model-error"


class ArityMismatch(ModelError):
    code = "arity-mismatch"


class NotEvaluable(ScopeforgeError):
    code = "not-evaluable"


class GenNotEvaluable(NotEvaluable):
    code = "gen-not-evaluable"
