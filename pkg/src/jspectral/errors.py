"""Exception hierarchy for the jspectral package."""


class JSpectralError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(JSpectralError):
    """Evaluation point is off the unit circle."""


class SizeError(JSpectralError):
    """A sampling grid is too small or not a power of two."""


class DimensionError(JSpectralError):
    """Matrix dimensions do not conform."""


class NotHermitian(JSpectralError):
    """Input matrix function is not Hermitian on the circle."""


class ScalarFactorError(JSpectralError):
    """Base class for scalar spectral factorization failures."""


class NotNonnegative(ScalarFactorError):
    """Input is not nonnegative on the circle (or has odd boundary zeros)."""


class ZeroInput(ScalarFactorError):
    """Input function is identically zero."""


class NonPositiveSample(ScalarFactorError):
    """Exp-Log path received a sample that is not strictly positive."""


class PaleyWienerViolation(ScalarFactorError):
    """Samples dip too close to zero for the Exp-Log path; use the root-based path."""


class SignMismatch(ScalarFactorError):
    """sign * s takes negative values on the grid."""


class InconstantSign(JSpectralError):
    """A leading principal minor changes sign on the circle.

    Carries the offending minor indices in ``minors``.
    """

    def __init__(self, message, minors=()):
        super().__init__(message)
        self.minors = tuple(minors)


class DivisionBlowup(JSpectralError):
    """A triangular-factor division hit a small denominator with a large numerator."""


class SingularD(JSpectralError):
    """The corrector's Toeplitz block is singular (constant term of f+ is zero)."""


class DeltaSingular(JSpectralError):
    """The core corrector system is numerically singular."""


class CSignatureMismatch(JSpectralError):
    """The constant Gram matrix of the corrector has the wrong inertia."""


class HyperbolicBreakdown(JSpectralError):
    """A pivot of the hyperbolic Schur elimination degenerated.

    Carries the failing elimination ``step``.
    """

    def __init__(self, message, step=-1):
        super().__init__(message)
        self.step = step


class WindowExceedsData(JSpectralError):
    """A requested truncation window is wider than the stored coefficients."""


class StageResidualExceeded(JSpectralError):
    """A recursion stage left a residual above tolerance.

    Carries the failing ``stage`` index m.
    """

    def __init__(self, message, stage=-1):
        super().__init__(message)
        self.stage = stage


class ParseError(JSpectralError):
    """An input file does not conform to the matrix file schema."""
