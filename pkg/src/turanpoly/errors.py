"""Exception types raised by turanpoly."""


class TuranPolyError(Exception):
    """Base class for all library errors."""


class SpecError(TuranPolyError, ValueError):
    """Malformed arithmetic-function spec or an out-of-range evaluation."""


class NotLogConcaveError(TuranPolyError, ValueError):
    """A square-root radicand went negative beyond tolerance."""

    def __init__(self, n, radicand):
        super().__init__(f"negative radicand {radicand} at n={n}: h is not log-concave there")
        self.n = n
        self.radicand = radicand


class NegativeDiscriminantError(TuranPolyError, ValueError):
    def __init__(self, n, x, discriminant):
        super().__init__(f"negative discriminant {discriminant} at n={n}, x={x}")
        self.n = n
        self.x = x
        self.discriminant = discriminant


class UnsupportedGError(TuranPolyError, ValueError):
    """The OPS/Turan machinery only applies to g = id."""


class RecurrenceError(TuranPolyError, ValueError):
    """Recurrence coefficients unusable for the requested operation."""


class RootIsolationError(TuranPolyError, ArithmeticError):
    """Roots could not be separated (multiple root or tolerance too coarse)."""
