"""Exception types shared across the package."""


class TorusDetError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TorusDetError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole."""


class ConvergenceError(TorusDetError, RuntimeError):
    """A truncated sum or iteration cannot certify the requested precision."""


class BudgetError(TorusDetError, RuntimeError):
    """An enumeration or truncation exceeds the configured work budget."""


class PolarizationError(TorusDetError, ValueError):
    """The Kaehler class is not representable (or not integral) as required."""


class SymmetryError(TorusDetError, ValueError):
    """A harmonic-symmetry precondition on a Beltrami matrix is violated."""


class IllConditionedError(TorusDetError, RuntimeError):
    """A least-squares fit is too ill-conditioned to report coefficients."""
