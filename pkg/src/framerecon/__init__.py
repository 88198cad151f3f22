"""Perfect reconstruction operators between Q_1 (least squares) and Q_0
(minimal quasi-optimality), with diagnostics and a nonuniform Fourier
sampling testbed."""

from .errors import (
    ContractViolation,
    ConvergenceError,
    DegenerateFrameError,
    FrameReconError,
    IllPosedError,
    InvariantViolation,
    NumericalFailure,
)
from .framekit import FiniteFrame, GramModel, TargetData, from_finite_frame
from .numkernel import ToleranceProfile
from .reconstruct import (
    Diagnostics,
    ReconstructionOperator,
    apply,
    build_qlambda,
    diagnostics,
    operator_norm,
    quasi_optimality,
    solve_normal_equations,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation", "ConvergenceError", "DegenerateFrameError", "FrameReconError",
    "IllPosedError", "InvariantViolation", "NumericalFailure",
    "FiniteFrame", "GramModel", "TargetData", "from_finite_frame", "ToleranceProfile",
    "Diagnostics", "ReconstructionOperator", "apply", "build_qlambda", "diagnostics",
    "operator_norm", "quasi_optimality", "solve_normal_equations",
]
