"""Exception hierarchy shared by every module of the package."""


class ArpError(Exception):
    """Base class for all errors raised by arpsadic."""


class UnknownLabel(ArpError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ParseError(ArpError, ValueError):
    pass


class PrecisionExhausted(ArpError, ArithmeticError):
    """The comparison oracle could not decide a sign within the bit cap."""


class DegenerateVector(ArpError, ValueError):
    """The vector lies on a boundary of the partition; no matrix is chosen."""


class NonDeterministicInput(ArpError, ValueError):
    pass


class InsufficientDirective(ArpError, ValueError):
    """The finite directive window cannot produce the requested prefix."""


class StabilizationFailed(ArpError, RuntimeError):
    pass


class FactorNotFound(ArpError, LookupError):
    pass


class ProfileMismatch(ArpError, AssertionError):
    """Two routes to the complexity function disagree."""


class NotAFactorImage(ArpError, ValueError):
    pass


class InvalidTable(ArpError, ValueError):
    pass


class ChainStuck(ArpError, RuntimeError):
    pass


class PatternMismatch(ArpError, ValueError):
    pass
