"""Exception and warning classes raised across the package."""

from __future__ import annotations


class SawiPrabhakarError(Exception):
    """Base class for every error raised by this package."""


class InvalidOrder(SawiPrabhakarError, ValueError):
    """An order parameter (alpha, rho, nu, ...) lies outside its admissible range."""


class NonConvergence(SawiPrabhakarError, ArithmeticError):
    """A series did not satisfy its stopping rule before the term cap."""


class OutOfSupportedRange(SawiPrabhakarError, ValueError):
    """The argument is outside the range served by the series evaluator."""


class QuadratureFailure(SawiPrabhakarError, ArithmeticError):
    """Quadrature nodes could not be generated or produced non-finite values."""


class OutOfRegion(SawiPrabhakarError, ValueError):
    """The transform variable lies outside the convergence region of an image."""


class ArityMismatch(SawiPrabhakarError, ValueError):
    """The number of initial values does not match the derivative order."""


class ContourFailure(SawiPrabhakarError, ArithmeticError):
    """A contour node evaluation was not finite."""


class BranchCut(SawiPrabhakarError, ValueError):
    """A real power base fell on or across the principal branch cut."""


class MixedBase(SawiPrabhakarError, ValueError):
    """Atoms with different (alpha, omega) were combined."""


class NotInvertible(SawiPrabhakarError, ValueError):
    """An atom has no Mittag-Leffler preimage (mu + 2 <= 0)."""


class GridTooCoarse(SawiPrabhakarError, ValueError):
    """The grid has too few nodes for the requested stencil."""


class SingularStep(SawiPrabhakarError, ArithmeticError):
    """The implicit step coefficient of a Volterra recurrence vanished."""


class TruncationWarning(UserWarning):
    """A truncated series left a tail larger than the requested tolerance."""


class DivergentSeriesWarning(UserWarning):
    """A geometric expansion ratio is not below one at the probe point."""
