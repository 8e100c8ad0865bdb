"""Exception types raised across the package."""


class ErmError(ValueError):
    """Base class for every error raised by ermrev."""


class CurveError(ErmError):
    pass


class NonMonotoneQuantiles(CurveError):
    pass


class NonConcave(CurveError):
    pass


class NegativeRevenue(CurveError):
    pass


class NonzeroOrigin(CurveError):
    pass


class NonPositiveScale(CurveError):
    pass


class InfeasibleBump(CurveError):
    pass


class CurveParseError(CurveError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OutOfRange(ErmError):
    pass


class EmptySample(ErmError):
    pass


class ToleranceNotMet(ErmError):
    pass


class DegenerateRegion(ErmError):
    pass


class BoundViolated(ErmError):
    pass


class SearchFailed(ErmError):
    pass
