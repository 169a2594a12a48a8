"""Exception types shared across the package."""


class ScaleFeedbackError(Exception):
    """Base class for all library-specific errors."""


class InvalidInputError(ScaleFeedbackError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateEnvironmentError(ScaleFeedbackError):
    """The trajectory set has a zero reward gap, so slider responses are undefined."""


class DegenerateMeasureError(ScaleFeedbackError):
    """A performance measure's denominator is zero or non-positive."""


class DegeneratePosteriorError(ScaleFeedbackError):
    """The posterior sample mean collapsed to the zero vector."""
