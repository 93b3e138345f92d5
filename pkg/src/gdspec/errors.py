"""Exception types raised across the package."""


class GdspecError(Exception):
    """Base class for all package errors."""


class InvalidIntersectionArray(GdspecError, ValueError):
    pass


class NonIntegralShell(InvalidIntersectionArray):
    """A shell size n_{i+1} = n_i b_i / c_{i+1} is not an integer."""


class DegenerateSpectrum(GdspecError):
    """Two eigenvalues of the quotient matrix coincide within tolerance."""


class MultiplicityNotIntegral(GdspecError):
    pass


class FactorizationResidual(GdspecError):
    """The factored and expanded forms of a spectral polynomial disagree."""


class DimensionMismatch(GdspecError, ValueError):
    pass


class NoConvergence(GdspecError):
    pass


class OutOfRange(GdspecError, ValueError):
    pass


class UnsupportedFamily(GdspecError, ValueError):
    pass


class Unavailable(GdspecError):
    """No closed form is known for the requested family."""


class UnknownGraph(GdspecError, ValueError):
    pass


class Disconnected(GdspecError, ValueError):
    pass


class NotSumDecomposable(GdspecError, ValueError):
    pass


class DomainViolation(GdspecError, ValueError):
    """A vector is outside the competition domain 1 = f_0 >= f_1 >= ... >= 0."""


class Infeasible(GdspecError):
    pass


class Unbounded(GdspecError):
    pass


class SolverTolerance(GdspecError):
    """Two independent LP routes disagree beyond tolerance."""


class RowSumViolation(GdspecError, ValueError):
    pass


class BlowUp(GdspecError):
    pass


class StepSizeError(GdspecError, ValueError):
    pass
