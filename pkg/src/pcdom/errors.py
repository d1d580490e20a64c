"""Exception types raised across the package."""


class PcdError(ValueError):
    """Base class for every error raised by pcdom."""


class BadParameter(PcdError):
    pass


class DegenerateReference(PcdError):
    pass


class EmptyReference(PcdError):
    pass


class OutOfInterval(PcdError):
    pass


class CoincidentPoint(PcdError):
    pass


class EmptyCell(PcdError):
    pass


class WrongSpecialization(PcdError):
    pass


class OracleTooLarge(PcdError):
    pass


class BadSampleSize(PcdError):
    pass


class QuadratureFailed(PcdError):
    pass


class UnsupportedSupport(PcdError):
    pass


class BadSupport(PcdError):
    pass


class NotInvertible(PcdError):
    pass


class OrderDetectionFailed(PcdError):
    pass


class EnumerationTooLarge(PcdError):
    pass


class BadConfig(PcdError):
    pass
