"""Exception types shared across the package."""


class AirylabError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(AirylabError):
    """Input field or interval fails a structural precondition."""


class InvalidParameterError(AirylabError):
    """A symmetry or configuration parameter is out of range."""


class InvalidExponentError(AirylabError):
    """Lebesgue or concentration exponent outside the allowed range."""


class SingularMultiplierError(AirylabError):
    """Negative-order multiplier applied to a field with DC mass."""


class DegenerateInputError(AirylabError):
    """Zero field (or zero denominator) where a ratio is requested."""


class AliasingError(AirylabError):
    """Requested operation would push spectral content outside the usable band."""
