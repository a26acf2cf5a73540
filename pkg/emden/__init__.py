"""Entire solutions of singular Emden-Fowler equations with a gradient term."""

__version__ = '0.1.0'

from .barrier import (
    BarrierData,
    IntegrabilityVerdict,
    check_integrability,
    compute_K,
    compute_barrier,
    verify_supersolution,
)

from .define import (
    Problem,
    RunConfig,
    load_config,
    majorant,
    make_potential,
    parse_expression,
    save_config,
    validate_problem,
)

from .discretize import (
    RadialGrid,
    RadialProfile,
    choose_epsilon,
    discrete_laplacian,
    first_eigenpair,
)

from .errors import (
    DivergentPotentialError,
    EmdenError,
    InvalidProblemError,
)

from .functions import (
    make_problem,
    run_barrier,
    run_check,
    run_cli,
    run_eigen,
    run_probe,
    run_solve,
    run_verify,
)

from .solve import (
    BallProblem,
    EntireSolution,
    ExhaustionConfig,
    solve_ball,
    solve_entire,
    uniqueness_probe,
    verify_manufactured,
)
