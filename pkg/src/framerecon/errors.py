"""Exception types shared across the package."""


class FrameReconError(Exception):
    """Base class for every error raised by framerecon."""


class ContractViolation(FrameReconError, ValueError):
    """An input breaks a documented precondition (shape, symmetry, range)."""


class NumericalFailure(FrameReconError, ArithmeticError):
    """A decomposition or iteration did not produce a usable result."""


class DegenerateFrameError(ContractViolation):
    """All eigenvalues of a Gramian vanish; there is no spanned subspace."""


class IllPosedError(ContractViolation):
    """The reconstruction and sampling spaces meet at angle pi/2 (cos ~ 0).

    Raised when no perfect reconstruction operator exists numerically.
    """

    def __init__(self, message, cos_angle=None):
        super().__init__(message)
        self.cos_angle = cos_angle


class ConvergenceError(NumericalFailure):
    """Iterative solver stopped before reaching its residual threshold."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class InvariantViolation(FrameReconError, AssertionError):
    """A per-realization theorem check failed beyond tolerance."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump or {}
