"""Exception types raised across the package."""


class ParameterError(ValueError):
    """Base class for rejected parameter sets."""


class NonPositiveParameter(ParameterError):
    def __init__(self, name, value=None):
        self.name = name
        self.value = value
        super().__init__(f"parameter {name!r} must be strictly positive (got {value!r})")


class EffectivenessOutOfRange(ParameterError):
    def __init__(self, value):
        self.name = "p"
        self.value = value
        super().__init__(f"vaccine effectiveness p must lie in (0, 1) (got {value!r})")


class OrderingViolation(ParameterError):
    """Raised when ``beta2 > beta1`` or ``alpha2 > alpha1``."""

    def __init__(self, which):
        self.which = which
        self.name = f"{which}2"
        super().__init__(f"ordering constraint violated: {which}2 must not exceed {which}1")


class InvalidHillExponent(ParameterError):
    def __init__(self, value):
        self.name = "n"
        self.value = value
        super().__init__(f"Hill exponent n must be an integer >= 1 (got {value!r})")


class UnknownParameter(ParameterError):
    def __init__(self, names):
        self.names = sorted(names)
        self.name = self.names[0]
        super().__init__(f"unknown parameter field(s): {', '.join(self.names)}")


class RequiresHollingTypeII(ValueError):
    """The global threshold and its upper-bound matrix are only defined for n = 1."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"operation requires Holling type II dose-response (n = 1), got n = {n}")


class NonFinite(ValueError):
    pass


class SingularLinearSolve(ArithmeticError):
    pass


class IntegrationError(RuntimeError):
    pass


class MaxStepsExceeded(IntegrationError):
    pass


class StepSizeUnderflow(IntegrationError):
    pass


class TraceTooShort(ValueError):
    pass
