"""Exception hierarchy shared by all fewnomial modules."""


class FewnomialError(Exception):
    """Base class for every error raised by this package."""


class DuplicateExponent(FewnomialError, ValueError):
    pass


class RankDeficient(FewnomialError):
    """The exponent vectors do not span R^n; the system has infinitely many solutions."""


class EvenIndex(FewnomialError):
    """The exponent vectors span a sublattice of even index in Z^n."""


class UnsupportedDimension(FewnomialError):
    pass


class UnsupportedK(FewnomialError):
    pass


class DegenerateIntersection(FewnomialError):
    """The solution space L of the linear forms lies in a coordinate hyperplane or is not essential."""


class InconsistentPoint(FewnomialError, ValueError):
    """A point of R^{n+k} that is not in the image of the monomial map."""


class OnArrangement(FewnomialError, ValueError):
    """Evaluation requested on (or numerically on) a hyperplane of the arrangement."""


class ClearingFailure(FewnomialError):
    """Denominators failed to cancel while clearing the Jacobian chain."""


class GenericityViolation(FewnomialError):
    pass


class FaceDegeneracy(GenericityViolation):
    pass


class ZeroPolynomial(FewnomialError, ValueError):
    pass


class PositiveDimensional(FewnomialError):
    """The polynomial system has a curve of common zeros (resultant vanishes identically)."""


class SamplingExhausted(FewnomialError):
    pass


class StepCollapse(FewnomialError):
    pass


class InstanceFormatError(FewnomialError, ValueError):
    pass
