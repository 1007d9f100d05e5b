"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`ToeplitzError`,
so the CLI can map them to a single exit code.
"""


class ToeplitzError(Exception):
    """Base class for all package errors."""

    code = "ERROR"


class DimensionMismatch(ToeplitzError, ValueError):
    code = "DIMENSION_MISMATCH"


class OutsideDisc(ToeplitzError, ValueError):
    code = "OUTSIDE_DISC"


class DegenerateEllipse(ToeplitzError, ValueError):
    code = "DEGENERATE_ELLIPSE"


class NotInInterior(ToeplitzError, ValueError):
    code = "NOT_IN_INTERIOR"


class NoConvergence(ToeplitzError, RuntimeError):
    code = "NO_CONVERGENCE"


class OnCurve(ToeplitzError, ValueError):
    code = "ON_CURVE"


class NonIntegerWinding(ToeplitzError, RuntimeError):
    code = "NON_INTEGER_WINDING"


class OutOfAnnulus(ToeplitzError, ValueError):
    code = "OUT_OF_ANNULUS"


class EigenResidualTooLarge(ToeplitzError, ValueError):
    code = "EIGEN_RESIDUAL_TOO_LARGE"


class SpectralGapViolation(ToeplitzError, ValueError):
    code = "SPECTRAL_GAP_VIOLATION"


class ProjectionIllConditioned(ToeplitzError, RuntimeError):
    code = "PROJECTION_ILL_CONDITIONED"


class SupportOverflow(ToeplitzError, ValueError):
    code = "SUPPORT_OVERFLOW"


class PreconditionError(ToeplitzError, ValueError):
    code = "PRECONDITION"
