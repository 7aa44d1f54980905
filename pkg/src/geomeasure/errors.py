"""Exception hierarchy.

The CLI maps :class:`ValidationError` to exit code 2 and
:class:`CapabilityError` to exit code 3.
"""


class GeoMeasureError(Exception):
    exit_code = 1


class ValidationError(GeoMeasureError, ValueError):
    """Input violates a documented precondition."""

    exit_code = 2


class DimensionMismatchError(ValidationError):
    def __init__(self, mode, expected, got):
        self.mode = mode
        self.expected = expected
        self.got = got
        super().__init__(
            f"dimension mismatch in mode {mode}: expected {expected}, got {got}"
        )


class CapabilityError(GeoMeasureError):
    """Request is well formed but outside what the chosen solver supports."""

    exit_code = 3


class DegenerateSpectrumError(CapabilityError):
    """Elimination met an identically vanishing polynomial (infinitely many candidates)."""
