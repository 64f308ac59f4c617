"""Exception hierarchy shared by every qgeom module."""


class QGeomError(Exception):
    """Base class for all library errors."""


class NonPrime(QGeomError, ValueError):
    pass


class TooLarge(QGeomError, ValueError):
    pass


class DivisionByZero(QGeomError, ZeroDivisionError):
    pass


class FieldMismatch(QGeomError, ValueError):
    pass


class DimensionMismatch(QGeomError, ValueError):
    pass


class BadRange(QGeomError, ValueError):
    pass


class BadExponent(QGeomError, ValueError):
    pass


class EmptySet(QGeomError, ValueError):
    pass


class SingletonSet(QGeomError, ValueError):
    """The Salem condition does not depend on s when |E| = 1."""


class ExactnessViolation(QGeomError, ArithmeticError):
    """An exact identity produced a non-integral or mismatched value.

    Never expected; it means an arithmetic bug somewhere upstream.
    """


class URangeViolation(QGeomError, ValueError):
    pass


class HypothesisNotMet(QGeomError, ValueError):
    pass


class EvenCharacteristic(QGeomError, ValueError):
    pass


class SizeRange(QGeomError, ValueError):
    pass


class SizeTooLarge(QGeomError, ValueError):
    pass


class ConfigError(QGeomError, ValueError):
    pass
