"""Exception hierarchy for the materials selection engine.

Every error raised by the library derives from :class:`MatselError`, so
callers (CLI, HTTP service) can map the whole family onto exit codes or
HTTP statuses with a single except clause.
"""

from __future__ import annotations


class MatselError(Exception):
    """Base class for all library errors."""


class InvalidValueError(MatselError):
    """A property value does not fit its property definition."""


class SchemaLoadError(MatselError):
    """Schema file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RulesLoadError(MatselError):
    """Rules file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataLoadError(MatselError):
    """Materials CSV is malformed; carries the offending row number.

    Row numbers are 1-based physical line numbers (the header is row 1).
    """

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class RequirementError(MatselError):
    """A design requirement violates its invariants (empty, duplicate or
    unknown property, bad value)."""


class UnclassifiableError(MatselError):
    """No decision rule fired for the requirement.

    ``nearest_misses`` lists (rule_id, satisfied_conditions, total_conditions)
    for the evaluated rules that came closest to firing.
    """

    def __init__(self, message: str, nearest_misses: list[tuple[int, int, int]] | None = None):
        self.nearest_misses = nearest_misses or []
        if self.nearest_misses:
            detail = ", ".join(
                f"rule {rid} ({sat}/{tot} conditions met)" for rid, sat, tot in self.nearest_misses
            )
            message = f"{message}; nearest misses: {detail}"
        super().__init__(message)


class MetricDomainError(MatselError):
    """Input vectors violate a metric's preconditions (length mismatch,
    non-finite entries, non-positive components, zero variance)."""


class NoCandidatesError(MatselError):
    """Selection was asked to rank an empty candidate matrix."""


class NoScorableCandidatesError(NoCandidatesError):
    """Every candidate row was excluded by the metric's preconditions.

    ``exclusions`` lists (material_id, reason) pairs.
    """

    def __init__(self, message: str, exclusions: list[tuple[str, str]] | None = None):
        self.exclusions = exclusions or []
        if self.exclusions:
            detail = "; ".join(f"{mid}: {reason}" for mid, reason in self.exclusions)
            message = f"{message} ({detail})"
        super().__init__(message)
