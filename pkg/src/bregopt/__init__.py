"""Bregman proximal gradient solvers with extrapolation, plus the Poisson
linear inverse and sparse quadratic inverse applications and a benchmark
harness."""

from .errors import BregoptError, DomainError, NumericalError, ValidationError
from .kernels import (
    BurgKernel,
    EuclideanKernel,
    Kernel,
    QuarticKernel,
    cubic_root_scale,
    three_point_identity_residual,
)
from .problems import (
    CompositeObjective,
    L1Term,
    NonsmoothTerm,
    SmoothTerm,
    ZeroTerm,
    check_smad,
    objective_value,
    soft_threshold,
)
from .solvers import (
    EXIT_MAX_ITERATIONS,
    EXIT_MODES,
    EXIT_NUMERICAL_FAILURE,
    EXIT_TOLERANCE,
    IterationRecord,
    RateReport,
    LineSearchConfig,
    SolveResult,
    SolverConfig,
    bpg_solve,
    bpge_solve,
    line_search_beta,
    pg_solve,
    pge_solve,
    sublinear_rate_check,
)

__all__ = [
    "BregoptError", "DomainError", "NumericalError", "ValidationError",
    "Kernel", "EuclideanKernel", "BurgKernel", "QuarticKernel",
    "cubic_root_scale", "three_point_identity_residual",
    "CompositeObjective", "SmoothTerm", "NonsmoothTerm", "ZeroTerm",
    "L1Term", "soft_threshold", "check_smad", "objective_value",
    "EXIT_TOLERANCE", "EXIT_MAX_ITERATIONS", "EXIT_NUMERICAL_FAILURE",
    "EXIT_MODES", "RateReport",
    "LineSearchConfig", "SolverConfig", "IterationRecord", "SolveResult",
    "line_search_beta", "bpge_solve", "bpg_solve", "pge_solve", "pg_solve",
    "sublinear_rate_check",
]

__version__ = "0.1.0"
