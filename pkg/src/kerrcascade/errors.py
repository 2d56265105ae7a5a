"""Exception types shared across the package."""


class KerrCascadeError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(KerrCascadeError):
    """A Fock truncation dimension is too small or inconsistent."""


class DimensionMismatchError(KerrCascadeError):
    """Operands live on different truncated Fock spaces."""


class ModeIndexError(KerrCascadeError, IndexError):
    """A mode index is outside the chain."""


class UnsupportedConfigurationError(KerrCascadeError):
    """The requested operation does not support these parameters."""


class SteadyStateAmbiguityError(KerrCascadeError):
    """The null space of the generator is degenerate (no unique steady state)."""


class SolverConvergenceError(KerrCascadeError):
    """A solver finished without reaching its residual or drift target."""


class DegenerateExpansionError(KerrCascadeError):
    """Polar fluctuation expansion attempted around a zero-amplitude mode."""


class UnstablePointError(KerrCascadeError):
    """Drift matrix is not Hurwitz: linearization around an unstable point."""


class SingularParameterError(KerrCascadeError):
    """A closed-form expression is evaluated at a pole."""


class UndefinedObservableError(KerrCascadeError):
    """Observable undefined for this state (e.g. g2 of the vacuum)."""


class ScenarioError(KerrCascadeError):
    """A scenario document failed to parse or validate."""
