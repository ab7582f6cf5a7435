"""Exception hierarchy shared by all isoppp modules."""


class IsopppError(Exception):
    """Base class for every error raised by this package."""


class DomainError(IsopppError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidScenarioParams(DomainError):
    """Scenario parameters are inconsistent (ordering, ranges, level sums)."""


class InvalidLevel(DomainError):
    """Constant density level outside (0, 1]."""


class InvalidExponent(DomainError):
    """Tail exponent must be strictly positive."""


class UnsupportedAlpha(DomainError):
    """Closed forms exist only for path-loss exponents 2 and 4."""


class RequiresZeroC(DomainError):
    """Operation is defined only for the unbounded path-loss model (c = 0)."""


class OutsideRegion(DomainError):
    """Receiver offset is not interior to the required radial region."""


class DegenerateDenominator(IsopppError, ZeroDivisionError):
    """A relative metric was requested where its denominator vanishes."""


class DivergentIntegral(IsopppError, ArithmeticError):
    """The requested quantity is infinite for this density/path-loss pair."""


class NonConvergence(IsopppError, ArithmeticError):
    """Adaptive quadrature hit its evaluation budget before the tolerance.

    Carries the best available estimate in ``result`` when the failing
    operation produced one.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class NoFiniteTruncation(IsopppError):
    """No finite sampling radius can bound the neglected interference."""
