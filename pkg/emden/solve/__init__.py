"""Ball solves, the exhaustion by balls and the self test."""

from .ball import (
    BallProblem,
    GradientComparison,
    SolveReport,
    compare_gradient_effect,
    jacobian,
    nonlinear_residual,
    solve_ball,
)

from .exhaust import (
    EntireSolution,
    ExhaustionConfig,
    ProbeReport,
    Setup,
    cross_initialization,
    solve_entire,
    uniqueness_probe,
)

from .manufactured import (
    ConvergenceStudy,
    verify_manufactured,
)
