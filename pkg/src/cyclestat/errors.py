"""Exception hierarchy shared by every cyclestat module."""


class CyclestatError(Exception):
    """Base class for all library errors."""


class ZeroConstantTerm(CyclestatError, ZeroDivisionError):
    """A series or denominator with vanishing constant term was inverted."""


class NegativeExponent(CyclestatError, ValueError):
    pass


class InvalidDescriptor(CyclestatError, ValueError):
    """A descriptor violates a structural invariant (bad q, malformed polys, ...)."""


class InconsistentDescriptor(CyclestatError, ValueError):
    """Derived counts are negative or non-integral: the input is not a zeta function."""


class TruncationTooShort(CyclestatError, ValueError):
    pass


class NotRational(CyclestatError, ValueError):
    """The operation needs a rational zeta function but only point counts are known."""


class NonPositiveValue(CyclestatError, ValueError):
    pass


class DomainError(CyclestatError, ValueError):
    pass


class RangeError(CyclestatError, ValueError):
    pass


class NoSuchPrimeDegree(CyclestatError, ValueError):
    """No closed point of the requested degree exists."""


class CapExceeded(CyclestatError, ValueError):
    pass


class DegenerateWindow(CyclestatError, ValueError):
    pass
