"""Exception and warning types shared across the package."""


class RiskScoresError(Exception):
    """Base class for all library errors."""


class MissingColumn(RiskScoresError):
    pass


class UnmappableLabel(RiskScoresError):
    pass


class NonNumericFeature(RiskScoresError):
    pass


class SingleClass(RiskScoresError):
    pass


class TooFewSamples(RiskScoresError):
    pass


class DimensionMismatch(RiskScoresError):
    pass


class EmptySupport(RiskScoresError):
    """Raised when a warm start carries weight outside the requested support."""


class NonFiniteLoss(RiskScoresError):
    pass


class NoCandidates(RiskScoresError):
    """All candidate supports for a beam expansion were already explored."""


class MalformedJson(RiskScoresError):
    pass


class ConstantColumn(UserWarning):
    """A column selected for binarization had at most one unique value."""


class ZeroModel(UserWarning):
    """A continuous model with empty support was sent to the integer search."""
