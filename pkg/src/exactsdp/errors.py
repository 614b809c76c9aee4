"""Exception hierarchy.

Each class carries a short machine-readable ``category`` which the command
line front end prints and maps to an exit status.
"""


class SdpError(Exception):
    category = "error"


class ParseError(SdpError):
    category = "parse"


class ValidationError(SdpError):
    """The instance violates one of the standing hypotheses of the method."""

    category = "validation"


class SingularMatrixError(SdpError, ArithmeticError):
    category = "singular"

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class RankDeficiencyError(SingularMatrixError):
    category = "rank-deficient"


class RepresentationError(SdpError, ValueError):
    """A matrix is not of the form X0 + (element of the constraint kernel)."""

    category = "representation"


class GeometryError(SdpError, ValueError):
    """A point handed to the barrier machinery is not positive definite."""

    category = "geometry"


class DegenerateObjectiveError(SdpError, ValueError):
    category = "degenerate-objective"


class InvariantError(SdpError):
    """An exactly checked invariant of the interior point loop failed."""

    category = "invariant"

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state or {}


class IterationBudgetExceeded(InvariantError):
    category = "iteration-budget"
