"""Exception and warning types raised by the numerical engines."""


class FRHError(Exception):
    """Base class for all errors raised by :mod:`frh`."""


class NumericDomainError(FRHError):
    """A request falls outside the regime an algorithm is valid for."""


class DomainError(NumericDomainError, ValueError):
    pass


class NonConvergence(NumericDomainError):
    pass


class BadBracket(FRHError, ValueError):
    pass


class StepUnderflow(NumericDomainError):
    pass


class TangentialZeroSuspected(NumericDomainError):
    """A sign-preserving dip of ``|f|`` below the scan tolerance was seen."""


class UnwrapAmbiguity(NumericDomainError):
    pass


class PredicateNotBracketed(NumericDomainError):
    pass


class NoLocalMinimum(NumericDomainError):
    pass


class OracleMismatch(FRHError):
    """Two independent constructions of the same coefficients disagree."""


class NotConverged(NumericDomainError):
    pass


class OutsideRadius(NumericDomainError):
    def __init__(self, t, radius, margin):
        self.t = t
        self.radius = radius
        self.margin = margin
        super().__init__(
            f"t={t:g} is outside the convergence window "
            f"(R={radius:.6g}, margin {margin:g})"
        )


class AliasingWarning(RuntimeWarning):
    pass


class TruncationWarning(RuntimeWarning):
    pass
