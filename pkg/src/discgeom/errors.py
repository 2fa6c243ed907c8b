"""Exception taxonomy shared across the package."""


class DiscgeomError(Exception):
    """Base class for all errors raised by discgeom."""


# --- expression DSL ---------------------------------------------------------


class ExprError(DiscgeomError):
    """Base class for defining-function expression errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.expected = tuple(expected)


class DimensionError(ExprError):
    """A variable index exceeds the declared ambient dimension."""


class RealnessError(ExprError):
    """The expression (or a subexpression that must be real) is complex-valued."""


class EvalDomainError(ExprError):
    """Evaluation hit a point outside an operation's domain of definition.

    Carries the pretty-printed offending subexpression when available.
    """

    def __init__(self, message, subexpr=None):
        super().__init__(message if subexpr is None else f"{message} in `{subexpr}`")
        self.subexpr = subexpr


class MissingParameterError(ExprError):
    pass


# --- domains ----------------------------------------------------------------


class DomainError(DiscgeomError):
    """Base class for domain-catalog errors."""


class UnknownDomainError(DomainError):
    pass


class BadParameterError(DomainError):
    pass


class GuardError(DomainError):
    """A point lies on an excluded locus of the defining function."""


class LocalityError(DomainError):
    """A query left the box in which the defining function is valid."""


# --- geometry ---------------------------------------------------------------


class GeometryError(DiscgeomError):
    pass


class NoSignChangeError(GeometryError):
    """The defining function does not change sign along the search ray."""


class DegenerateGradientError(GeometryError):
    """|grad r| fell below the trust threshold at a boundary point."""


class CollarExitError(GeometryError):
    """A tangential curve left the configured boundary collar."""


# --- disc analysis ----------------------------------------------------------


class DiscAnalysisError(DiscgeomError):
    pass


class CenterOutsideError(DiscAnalysisError):
    """The bidisc center p - delta*N is not an interior point."""


class InsufficientDataError(DiscAnalysisError):
    pass


# --- fitting / hoelder ------------------------------------------------------


class DegenerateFitError(DiscgeomError):
    """Too few usable samples to fit a log-log slope."""


class SupportFailureError(DiscgeomError):
    """The candidate half-space does not support the domain at the point.

    Carries a violating interior sample so callers can report it.
    """

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class ExitDomainError(DiscgeomError):
    """A difference-quotient sample left the domain."""


# --- cli --------------------------------------------------------------------


class ConfigError(DiscgeomError):
    """Bad run configuration (maps to exit code 2)."""
