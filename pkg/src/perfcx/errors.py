"""Exception types. Every error carries a stable ``code`` used by the CLI."""

from __future__ import annotations


class PerfcxError(Exception):
    code = "ERROR"


class NonFieldRing(PerfcxError):
    code = "NON_FIELD_RING"


class ShapeMismatch(PerfcxError):
    code = "SHAPE_MISMATCH"


class MissingVariable(PerfcxError):
    code = "MISSING_VARIABLE"


class RingMismatch(PerfcxError):
    code = "RING_MISMATCH"


class InvalidRing(PerfcxError):
    code = "INVALID_RING"


class ScalarSyntaxError(PerfcxError):
    code = "SCALAR_SYNTAX"


class NotAComplex(PerfcxError):
    code = "NOT_A_COMPLEX"

    def __init__(self, degree: int, reason: str = "d o d != 0"):
        super().__init__(f"not a complex at degree {degree}: {reason}")
        self.degree = degree
        self.reason = reason


class NotChainMap(PerfcxError):
    code = "NOT_CHAIN_MAP"

    def __init__(self, degree: int | None = None, reason: str = "d f != f d"):
        where = "" if degree is None else f" at degree {degree}"
        super().__init__(f"not a chain map{where}: {reason}")
        self.degree = degree


class UnsupportedModule(PerfcxError):
    code = "UNSUPPORTED_MODULE"


class UnsupportedRing(PerfcxError):
    code = "UNSUPPORTED_RING"


class UnsupportedEmbedding(PerfcxError):
    code = "UNSUPPORTED_EMBEDDING"


class NotExtension(PerfcxError):
    code = "NOT_EXTENSION"


class NotQiso(PerfcxError):
    code = "NOT_QISO"


class NotBaseChanged(PerfcxError):
    code = "NOT_BASE_CHANGED"


class EmptyFamily(PerfcxError):
    code = "EMPTY_FAMILY"


class NoPointFound(PerfcxError):
    code = "NO_POINT_FOUND"


class FieldTooSmall(PerfcxError):
    code = "FIELD_TOO_SMALL"


class NotQisoInput(PerfcxError):
    code = "NOT_QISO_INPUT"


class InternalError(PerfcxError):
    code = "INTERNAL"


class ParseError(PerfcxError):
    code = "PARSE_ERROR"

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path or '/'}: {reason}")
        self.path = path
        self.reason = reason


class ValidationError(PerfcxError):
    code = "VALIDATION_ERROR"

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path or '/'}: {reason}")
        self.path = path
        self.reason = reason


class NotACocycle(PerfcxError):
    code = "NOT_A_COCYCLE"
