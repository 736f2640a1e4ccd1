"""Exception types shared across the package."""


class PitchkinError(Exception):
    """Base class for all package errors."""


# geometry
class DegenerateVector(PitchkinError):
    """A vector (or its relevant projection) is too short to orient."""


# ingest
class ParseError(PitchkinError):
    """File content could not be parsed."""


class SchemaError(PitchkinError):
    """Parsed content does not match the declared schema."""


class RangeError(PitchkinError):
    """A parsed value is outside its allowed range (non-finite, bad confidence, ...)."""


class LengthError(PitchkinError):
    """A sequence is too short to be usable."""


class UnknownMetric(PitchkinError):
    """Metric name not present in the metric registry."""


class DuplicatePitcherId(PitchkinError):
    """The same pitcher_id appears more than once."""


# lifting
class PredictorError(PitchkinError):
    """A trajectory predictor failed or returned malformed output."""


# refinement
class DegenerateSkeleton(PitchkinError):
    """Estimated reference skeleton contains a near-zero bone length."""


class DegenerateDirection(PitchkinError):
    """A bone direction could not be resolved even with fallbacks."""


class BadFilterParams(PitchkinError):
    """Invalid Savitzky-Golay window/order combination."""


class NonConvergence(PitchkinError):
    """An iterative solver stopped without meeting its tolerance."""


# handedness
class Disagreement(PitchkinError):
    """Ankle-height and pelvis-line handedness signals do not agree."""


# events
class EventOrderViolation(PitchkinError):
    """Detected delivery events are not in foot-plant <= MER <= release order."""


class TooShort(PitchkinError):
    """Sequence has too few frames for the requested computation."""


# analytics
class EmptyInput(PitchkinError):
    """No data to aggregate."""


class UnknownFeature(PitchkinError):
    """Feature name not present in the feature registry."""


class TooFewMinority(PitchkinError):
    """Minority class too small to oversample."""


class SingleClass(PitchkinError):
    """Both classes are required but only one is present."""


class SingleClassFold(PitchkinError):
    """A cross-validation fold ended up with a single class."""


class NoPairs(PitchkinError):
    """No paired predicted/reference values to compare."""


class ZeroVariance(PitchkinError):
    """A statistic requiring spread was asked of constant data."""


# synthesis
class InfeasibleTargets(PitchkinError):
    """A synthetic keyframe target is outside the feasible metric range."""
