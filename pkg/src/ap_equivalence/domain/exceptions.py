from typing import Optional


class ApEquivalenceError(Exception):
    """Base class for every error raised by ap_equivalence."""


class DimensionMismatch(ApEquivalenceError, ValueError):
    def __init__(self, expected: object, got: object):
        super().__init__(f"Dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class DuplicateExponent(ApEquivalenceError, ValueError):
    def __init__(self, index: int, first_index: int, where: str = "exponent list"):
        super().__init__(f"Duplicate exponent at position {index} (same as position {first_index}) in {where}")
        self.index = index
        self.first_index = first_index


class MixedSymbolTables(ApEquivalenceError, ValueError):
    pass


class NonExactInput(ApEquivalenceError, ValueError):
    pass


class ExactPhaseClosure(ApEquivalenceError, ValueError):
    """Merging exact coefficients gave a value outside (rational modulus, rational turns)."""


class MagnitudeOverflow(ApEquivalenceError, OverflowError):
    def __init__(self, term_index: int, log_magnitude: float):
        super().__init__(f"Term {term_index} overflows: lambda*sigma = {log_magnitude:.3f}")
        self.term_index = term_index
        self.log_magnitude = log_magnitude


class TruncationOutOfRange(ApEquivalenceError, ValueError):
    pass


class QuadraturePrecondition(ApEquivalenceError, ValueError):
    pass


class SeparationPrecondition(ApEquivalenceError, ValueError):
    pass


class StripPrecondition(ApEquivalenceError, ValueError):
    pass


class BoundaryTooClose(ApEquivalenceError):
    def __init__(self, margin: float, suggested_offset: complex, point: Optional[complex] = None):
        super().__init__(
            f"|f(s) - w| = {margin:.3e} on the rectangle boundary; "
            f"shift the rectangle by {suggested_offset}"
        )
        self.margin = margin
        self.suggested_offset = suggested_offset
        self.point = point


class VerdictMismatch(ApEquivalenceError):
    def __init__(self, reason: str):
        super().__init__(f"Verdict does not verify: {reason}")
        self.reason = reason


class InternalInvariantError(ApEquivalenceError):
    pass


class DslSyntaxError(ApEquivalenceError, ValueError):
    def __init__(self, message: str, line: int, column: int, source: Optional[str] = None):
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")
        self.line = line
        self.column = column


class UndeclaredSymbol(ApEquivalenceError, ValueError):
    def __init__(self, name: str, line: int):
        super().__init__(f"Undeclared symbol '{name}' at line {line}")
        self.name = name
        self.line = line


class MixedCoefficientModes(ApEquivalenceError, ValueError):
    def __init__(self, sum_name: str):
        super().__init__(f"Sum '{sum_name}' mixes exact and numeric coefficients")
        self.sum_name = sum_name


class DuplicateName(ApEquivalenceError, ValueError):
    pass


class UnknownName(ApEquivalenceError, KeyError):
    def __init__(self, name: str, kind: str = "sum"):
        super().__init__(f"Unknown {kind} '{name}'")
        self.name = name

    def __str__(self) -> str:
        return self.args[0]


class SchemaViolation(ApEquivalenceError, ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"Schema violation at {pointer or '/'}: {message}")
        self.pointer = pointer
