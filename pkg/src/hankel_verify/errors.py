"""Exception types raised across the package."""


class HankelVerifyError(Exception):
    """Base class for all errors raised by :mod:`hankel_verify`."""


class InvalidParameter(HankelVerifyError, ValueError):
    """A value lies outside its admissible domain."""


class InvalidQParameter(InvalidParameter):
    pass


class DivisionBySeriesWithVanishingConstantTerm(HankelVerifyError, ZeroDivisionError):
    pass


class CompositionWithNonvanishingInnerConstant(HankelVerifyError, ValueError):
    pass


class SqrtOfNonpositiveConstantTerm(HankelVerifyError, ValueError):
    pass


class SubordinationTargetInvalid(HankelVerifyError, ValueError):
    pass


class BoundViolation(HankelVerifyError):
    """A numerically observed maximum exceeds the closed-form bound."""


class SharpnessGap(HankelVerifyError):
    """The extremal function does not attain the numerically observed maximum."""


class ConfigInvalid(HankelVerifyError, ValueError):
    pass
