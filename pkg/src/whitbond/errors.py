"""Exception hierarchy shared by all subpackages."""


class WhitbondError(Exception):
    """Base class for library errors."""


class ValidationError(WhitbondError, ValueError):
    """Invalid model parameters, queries or configuration."""


class DomainError(WhitbondError, ValueError):
    """Argument outside the mathematical domain of a function."""


class PoleError(DomainError):
    """Argument within the pole guard of a Gamma-function pole."""


class ConvergenceError(WhitbondError, ArithmeticError):
    """A series or adaptive rule failed to meet its tolerance."""


class TailError(ConvergenceError):
    """No truncation point satisfies the requested tail bound."""


class EvaluationError(WhitbondError, ArithmeticError):
    """An image function failed at a Laplace-inversion node."""


class BranchError(DomainError):
    """Spectral parameter lies on or left of a branch point."""


class NoConvergentRoot(WhitbondError, ArithmeticError):
    """Neither characteristic root yields a convergent integral."""


class SeriesRadiusExceeded(WhitbondError, ArithmeticError):
    """Complex-order Bessel series requested beyond its radius."""


class StabilityError(WhitbondError, ArithmeticError):
    """Finite-difference solution shows spurious oscillation."""
