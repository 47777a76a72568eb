"""Exception types shared across the package."""


class DirichletSpaceError(Exception):
    """Base class for all package-specific errors."""


class InvalidGamma(DirichletSpaceError, ValueError):
    """Dilation factor must be strictly greater than 1."""


class DilationOverflow(DirichletSpaceError, ValueError):
    """Dilated arc would cover the whole circle."""


class OutsideDisc(DirichletSpaceError, ValueError):
    """Evaluation point must lie strictly inside the unit disc."""


class PrecisionLoss(DirichletSpaceError, ArithmeticError):
    """Requested tolerance could not be reached within the panel budget."""


class MassExceedsTotal(DirichletSpaceError, ValueError):
    """Subset mass cannot exceed the total mass of the measure."""


class HypothesisViolated(DirichletSpaceError, ValueError):
    """A required positivity hypothesis (positive point capacity) fails."""


class FamilyInvalid(DirichletSpaceError, ValueError):
    """Dilated arcs of a family are not pairwise disjoint."""


class DegenerateDenominator(DirichletSpaceError, ZeroDivisionError):
    """Energy + L2 denominator underflows (function is identically zero)."""


class EpsilonTooLarge(DirichletSpaceError, ValueError):
    """Construction parameter epsilon breaks the required disjointness."""


class InvalidLengths(DirichletSpaceError, ValueError):
    """Cantor length sequence violates the nesting/disjointness constraints."""


class PreconditionSeriesConverges(DirichletSpaceError, ValueError):
    """The capacity-zero series converges, so the example's precondition fails."""
