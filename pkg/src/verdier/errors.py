"""Exception types raised across the package."""


class VerdierError(Exception):
    """Base class for all errors raised by this package."""


class InputError(VerdierError, ValueError):
    """Malformed input (bad JSON shape, inconsistent sizes, ...)."""


class CycleError(InputError):
    pass


class UnknownElementError(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DuplicateElementError(InputError):
    pass


class NotGradedError(VerdierError):
    pass


class NotAFaceError(InputError):
    pass


class NotComparableError(InputError):
    pass


class NotIntervalClosedError(InputError):
    pass


class NoLeastElementError(VerdierError):
    pass


class NoGreatestElementError(VerdierError):
    pass


class RingMismatchError(VerdierError):
    pass


class ChainComplexError(InputError):
    """Shape mismatch or d∘d != 0 detected while building a complex or map."""


class ArithmeticOverflowError(VerdierError, OverflowError):
    """Machine-integer overflow with the big-integer fallback disabled."""


class PreconditionError(VerdierError):
    pass


class DataIntegrityError(VerdierError):
    pass
