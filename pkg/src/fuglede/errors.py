"""Exception types shared across the package.

Everything raised on purpose derives from :class:`FugledeError`, so callers
(and the service layer) can catch one base class and map it to an input
error instead of a crash.
"""


class FugledeError(Exception):
    """Base class for all errors raised by this package."""


# ---------------------------------------------------------------------------
# domain construction and closed-form inner products


class EmptyDomainError(FugledeError):
    """Domain has no intervals, or an interval has nonpositive length."""


class OverlapError(FugledeError):
    """Intervals overlap, touch, or are out of order."""


class DuplicateFrequencyError(FugledeError):
    """A frequency or residue list contains the same value twice."""


class IndicatorRangeError(FugledeError):
    """Indicator endpoints do not lie inside a single interval of the domain."""


# ---------------------------------------------------------------------------
# boundary matrices and spectra


class DimensionMismatchError(FugledeError):
    """Matrix, vector or domain sizes are inconsistent."""


class NonUnitaryError(FugledeError):
    """A matrix expected to be unitary is not, beyond tolerance."""


class WindowError(FugledeError):
    """Scan window is empty or inverted."""


class StepError(FugledeError):
    """Scan step is too coarse and could miss spectrum points."""


class SpanError(FugledeError):
    """Boundary samples of the candidate frequencies do not span C^n."""


class ConsistencyError(FugledeError):
    """A reconstructed boundary matrix fails to map left samples to right samples."""


class TooFewPointsError(FugledeError):
    """An operation needs at least two spectrum points."""


# ---------------------------------------------------------------------------
# evolution


class DomainMismatchError(FugledeError):
    """A sampled function lives on a different domain than the evolver."""


class UnequalLengthError(FugledeError):
    """Boundary evolution needs all intervals to have the same length."""


class GridMismatchError(FugledeError):
    """Sample grids disagree where they must match."""


# ---------------------------------------------------------------------------
# verification


class NonOrthogonalError(FugledeError):
    """Requested a computation that assumes pairwise orthogonal frequencies."""


class IrrationalEndpointError(FugledeError):
    """Exact tiling checks need rational endpoints and translations."""


# ---------------------------------------------------------------------------
# counterexample construction


class ZeroGradientError(FugledeError):
    """Quotient undefined because the gradient norm vanishes."""


class FunctionSpecError(FugledeError):
    """Test function string ("indicator:a:b", "exp:lam") is malformed."""


# ---------------------------------------------------------------------------
# two dimensional example


class NotInSpectrumError(FugledeError):
    """Frequency pair is not a point of the model spectrum."""


# ---------------------------------------------------------------------------
# parsing


class ParseError(FugledeError):
    """A spectrum expression or translation-set text could not be parsed.

    Carries the character position where parsing failed, when known.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class EmptyExpansionError(FugledeError):
    """Spectrum expression expands to no frequencies at all."""
