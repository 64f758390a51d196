"""Exception hierarchy.

Everything raised on purpose derives from :class:`QZetaError`.  Mathematical
domain failures (poles, non-convergence, empty brackets) derive from
:class:`DomainError`; the CLI maps those to exit code 3.
"""

from __future__ import annotations


class QZetaError(Exception):
    pass


class DomainError(QZetaError, ValueError):
    """The requested value does not exist or cannot be reached by this route."""


class ParamError(QZetaError, ValueError):
    pass


class InvalidCharacter(QZetaError, ValueError):
    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"invalid Dirichlet character: {axiom}" + (f" ({detail})" if detail else ""))


class BudgetExceeded(QZetaError, RuntimeError):
    pass


class PoleProximity(DomainError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message)


class PoleError(DomainError):
    pass


class PoleAtAlpha(PoleError):
    pass


class PoleAtBeta(PoleError):
    pass


class PoleAtOne(PoleError):
    pass


class NotConvergent(DomainError):
    pass


class OutsideCrystalDomain(DomainError):
    pass


class NoSignChange(DomainError):
    pass


class BracketContainsPole(DomainError):
    pass


class EnteredZeroFreeRegion(DomainError):
    pass


class NotConverged(DomainError):
    pass


class InsufficientData(DomainError):
    pass


class GridTooCoarse(UserWarning):
    """Adjacent candidate cells merged; refine the grid."""


class ClippedRegion(UserWarning):
    """Part of a scan rectangle lay in the zero-free half-plane and was dropped."""
