"""Exception hierarchy shared by all modules."""


class VibCavityError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(VibCavityError):
    """A numerical procedure could not deliver a trustworthy result."""


class NonPositiveLength(VibCavityError, ValueError):
    pass


class NotDifferentiable(VibCavityError, ValueError):
    pass


class DomainError(VibCavityError, ValueError):
    pass


class QuadratureFailure(NumericalError):
    pass


class ToleranceNotMet(NumericalError):
    pass


class InvariantViolation(NumericalError):
    pass


class NonPositivePhotonNumber(VibCavityError, ValueError):
    pass


class RootBracketFailure(NumericalError):
    pass


class NoThresholdInRange(NumericalError):
    pass


class ConfigError(VibCavityError):
    pass


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass


class IoError(VibCavityError, OSError):
    pass
