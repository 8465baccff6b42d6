from __future__ import annotations


class CloakforgeError(Exception):
    pass


class MalformedTable(CloakforgeError):
    pass


class LawViolation(CloakforgeError):
    def __init__(self, violations, what: str = "structure"):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        head = "; ".join(self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"{what} violates its laws: {head}{more}")


class NotParallel(CloakforgeError):
    pass


class ShapeMismatch(CloakforgeError):
    pass


class SizeLimitExceeded(CloakforgeError):
    pass


class MissingCloaks(CloakforgeError):
    pass


# Separate names kept for the individual operations that raise them.
MissingCloak = MissingCloaks
MissingBaseCloaks = MissingCloaks
MissingCodomainCloak = MissingCloaks


class NotStrong(CloakforgeError):
    pass


class NotAdjoint(CloakforgeError):
    pass


class NotHopf(CloakforgeError):
    pass


class BoundaryMismatch(CloakforgeError):
    pass


class HypothesisUnsatisfied(CloakforgeError):
    def __init__(self, hypothesis: str):
        self.hypothesis = hypothesis
        super().__init__(f"hypothesis unsatisfied: {hypothesis}")


class Inconsistency(CloakforgeError):
    """A computed object contradicts a result it was meant to confirm."""


class DocumentError(CloakforgeError):
    """An instance document could not be read; carries the 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ParseError(DocumentError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None, expected=()):
        self.expected = list(expected)
        if self.expected:
            message = f"{message} (expected {' or '.join(self.expected)})"
        super().__init__(message, line, col)


class ResolveError(DocumentError):
    def __init__(self, name: str, what: str = "name", line: int | None = None, col: int | None = None):
        self.name = name
        super().__init__(f"unknown {what}: {name!r}", line, col)


class ValidationError(DocumentError):
    def __init__(self, instance: str, cause: CloakforgeError, line: int | None = None, col: int | None = None):
        self.instance = instance
        self.cause = cause
        self.violations = list(getattr(cause, "violations", [str(cause)]))
        super().__init__(f"{instance}: {cause}", line, col)


class UnknownRecipe(CloakforgeError):
    pass
