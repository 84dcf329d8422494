"""Exception types shared across the library."""


class LatcrError(Exception):
    """Base class for model and solver failures."""


class InfeasibleConstraint(LatcrError):
    """The collision-ratio constraint cannot be met (Pc <= nu/2)."""


class NoRoot(LatcrError):
    """A bracketing solve found no sign change on its search interval."""


class ColumnSumViolation(LatcrError):
    """An assembled transition matrix is not column-stochastic."""


class SingularSystem(LatcrError):
    """The steady-state linear system is singular (reducible chain)."""


class DegenerateDenominator(LatcrError):
    """The closed-form steady-state denominator vanishes."""


class AmbiguousLandscape(LatcrError):
    """More than two stationary points found in the power search window."""

    def __init__(self, message: str, roots: tuple[float, ...] = ()):
        super().__init__(message)
        self.roots = roots
