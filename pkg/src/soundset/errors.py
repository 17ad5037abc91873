"""Exception taxonomy shared across the package.

Every data-level failure raises a SoundsetError subclass; the service maps
these to HTTP 400 and the CLI maps them to exit code 1.
"""


class SoundsetError(Exception):
    """Base class for all soundset data errors."""


# audio I/O
class MalformedContainer(SoundsetError):
    """Bytes are not a parseable RIFF/WAVE container (bad magic, truncation)."""


class UnsupportedFormat(SoundsetError):
    """Valid container but an unsupported codec, bit depth, or channel count."""


class ChannelMismatch(SoundsetError):
    pass


class NotMono(SoundsetError):
    pass


# gesture algebra
class RateMismatch(SoundsetError):
    pass


class LengthMismatch(SoundsetError):
    pass


class EmptyIntersection(SoundsetError):
    """The two gestures share no overlapping samples (disjoint pair)."""


class RowOutOfRange(SoundsetError):
    pass


class UnknownGesture(SoundsetError):
    pass


# estimators
class TooShort(SoundsetError):
    pass


class DegenerateSignal(SoundsetError):
    """Signal has no usable variation for the requested estimator."""


class OutOfRange(SoundsetError):
    pass


# synthesis
class InvalidHurst(SoundsetError):
    pass


class AliasedFrequency(SoundsetError):
    pass


class EmbeddingFallbackWarning(UserWarning):
    """Circulant embedding was not positive semi-definite; an approximate
    spectral synthesis was used instead."""


# recurrence
class SeriesTooShort(SoundsetError):
    pass


class InvalidEpsilon(SoundsetError):
    pass


class PointLimitExceeded(SoundsetError):
    """Embedded point count exceeds the configured O(M^2) memory cap."""


class IoFailure(SoundsetError):
    pass
