"""Exception and warning types shared across the package."""


class MoviError(Exception):
    """Base class for all data and contract errors raised by movi."""


class EmptyInput(MoviError):
    """Recording input contains no data rows (or no tracks)."""


class MalformedRow(MoviError):
    """A CSV row has wrong arity, an unparsable number, or a bad field."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class NonMonotonicTime(MoviError):
    """Timestamps within one entity track are not strictly increasing."""


class BadQuaternion(MoviError):
    """Quaternion norm deviates from 1 by more than the repairable band."""


class TooFewSamples(MoviError):
    """Operation requires more samples than the track provides."""


class BadWindow(MoviError):
    """Smoothing window must be an odd integer >= 1."""


class UnknownEntityKind(MoviError):
    """Entity kind is neither 'hand' nor 'object'."""


class InconsistentEntities(MoviError):
    """Scene layers reference an entity that is not declared."""


class BadSpec(MoviError):
    """Scenario spec violates its invariants or names the wrong kind."""


class ColumnMapError(MoviError):
    """Column-map config is missing keys or names absent columns."""


class ValidationFailed(MoviError):
    """Recording validation produced hard violations."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(str(v) for v in report.violations)
        super().__init__(f"recording failed validation: {lines}")


class DegenerateRotationWarning(UserWarning):
    """Slerp endpoints are orthogonal; shortest path is ambiguous and the
    interpolation fell back to normalized linear blending."""
