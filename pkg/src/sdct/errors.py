"""Exception types shared across the package."""


class ChartError(ValueError):
    """A point cannot be represented in the requested hemisphere chart."""


class TangentError(ValueError):
    """A vector that must lie in a tangent space does not."""


class SubproblemError(RuntimeError):
    """The trust-region subproblem solver failed (eigensolver breakdown)."""


class SingularGramError(RuntimeError):
    """The data Gram matrix is numerically rank deficient."""


class RankDeficiencyError(RuntimeError):
    """Recovered coefficient rows do not span R^n."""


class DegenerateDataError(RuntimeError):
    """The rounding program is degenerate (e.g. data without full rank)."""


class SimplexError(RuntimeError):
    """Internal simplex failure; indicates a bug or a malformed program."""
