"""Exception types shared across the package."""


class RailslotError(Exception):
    """Base class for all package errors."""


class InvalidVectorLength(RailslotError):
    """Decision vector length does not match the instance layout."""


class OutOfRange(RailslotError):
    """Normalized deviation outside [0, 1]."""


class DegenerateMargin(RailslotError):
    """Zero modification margin with a nonzero time difference."""


class OutsideSpan(RailslotError):
    """Requested position lies outside a service's spatial span."""


class TooLarge(RailslotError):
    """Instance exceeds the exhaustive enumeration cap."""


class EmptySample(RailslotError):
    """Statistical test received an empty sample."""


class InfeasibleSpec(RailslotError):
    """Generator spec cannot be satisfied on the given corridor."""


class ParseError(RailslotError):
    """Malformed instance or proposal file."""
