"""Damped Newton solver for the Dirichlet problem on a ball."""

from typing import (
    Any,
    Dict,
    List,
    Optional,
    Tuple,
)

import numpy as np

from scipy.linalg import solve_banded

from ..debug import Debug

from ..errors import (
    BracketCollapseError,
    MaxIterationsError,
    NonpositiveIterateError,
    StalledLineSearchError,
)

from ..define import (
    PotentialSpec,
    Problem,
    majorant,
    solve_potential,
)

from ..discretize import (
    RadialGrid,
    RadialProfile,
)

from ..util import (
    class_str,
    log_debug,
    log_warning,
)

######################################################################

# Regularization of |s|^a at s = 0.
GRADIENT_EPS = 1.0e-12

# Sufficient decrease constant of the line search.
ARMIJO = 1.0e-4

# Smallest step of the line search; shorter steps are taken as they are.
MIN_STEP = 1.0e-10

# Tolerance of the nodewise ordering checks.
ORDER_TOL = 1.0e-10

class BallProblem:
    """Discrete Dirichlet problem on a ball with an ordered bracket.

    The unknowns are the values at all the nodes of the grid.  Row 0
    is the equation at the origin with the symmetry closure, rows 1..M
    the equation at the interior nodes and the last row fixes the
    boundary value.

    """

    def __init__(
            self,
            problem: Problem,
            grid: RadialGrid,
            bracket_low: RadialProfile,
            bracket_high: RadialProfile,
            boundary_value: float = 0.0,
            p_spec: Optional[PotentialSpec] = None,
            drop_gradient: bool = False,
            gradient_eps: float = GRADIENT_EPS,
    ):
        """Initialize the problem.

        The source potential defaults to the one the radial solves use
        for the problem: p itself if radial, otherwise its majorant.
        With drop_gradient the gradient term is left out of the
        equation.

        """
        if boundary_value < 0.0:
            raise ValueError(f"negative boundary value {boundary_value!r}")
        for name, profile in (('low', bracket_low), ('high', bracket_high)):
            if profile.grid != grid:
                raise ValueError(f"bracket {name} is on another grid")
        if p_spec is None:
            p_spec = solve_potential(problem, majorant(problem))
        self._problem = problem
        self._grid = grid
        self._low = bracket_low
        self._high = bracket_high
        self._boundary_value = float(boundary_value)
        self._p_spec = p_spec
        self._drop_gradient = drop_gradient
        self._gradient_eps = gradient_eps
        nodes = grid.nodes
        self._p = np.asarray(p_spec.evaluate(nodes))
        self._q = np.asarray(problem.q_spec.evaluate(nodes))

    def __repr__(self) -> str:
        """Represent as string."""
        content = f"{self._grid!r}, boundary={self._boundary_value!r}"
        if self._drop_gradient:
            content += ", without gradient"
        return class_str(self, content)

    @property
    def problem(self) -> Problem:
        """Problem the ball problem truncates."""
        return self._problem

    @property
    def grid(self) -> RadialGrid:
        """Grid on the ball."""
        return self._grid

    @property
    def boundary_value(self) -> float:
        """Dirichlet value on the sphere."""
        return self._boundary_value

    @property
    def bracket_low(self) -> RadialProfile:
        """Subsolution."""
        return self._low

    @property
    def bracket_high(self) -> RadialProfile:
        """Supersolution."""
        return self._high

    @property
    def p_spec(self) -> PotentialSpec:
        """Source potential used in the equation."""
        return self._p_spec

    @property
    def drop_gradient(self) -> bool:
        """True if the gradient term is left out."""
        return self._drop_gradient

    @property
    def gradient_eps(self) -> float:
        """Regularization of the gradient term."""
        return self._gradient_eps

    @property
    def p_values(self) -> np.ndarray:
        """Source potential at the nodes."""
        return self._p

    @property
    def q_values(self) -> np.ndarray:
        """Gradient coefficient at the nodes."""
        return self._q

    def without_gradient(self) -> 'BallProblem':
        """Same problem with the gradient term left out."""
        return BallProblem(
            self._problem, self._grid, self._low, self._high,
            self._boundary_value, self._p_spec, True, self._gradient_eps,
        )

    def check_bracket(self) -> None:
        """Check that the bracket is ordered and the floor positive."""
        low = self._low.values[:-1]
        high = self._high.values[:-1]
        crossed = np.flatnonzero(low > high)
        if len(crossed) > 0:
            node = int(crossed[0])
            raise BracketCollapseError(node, float(low[node]), float(high[node]))
        nonpositive = np.flatnonzero(low <= 0.0)
        if len(nonpositive) > 0:
            node = int(nonpositive[0])
            raise NonpositiveIterateError(node, float(low[node]))

    def starting_values(self, initial: Optional[RadialProfile] = None) -> np.ndarray:
        """Initial iterate: the given profile or the supersolution.

        The iterate is projected into the bracket and given the
        boundary value.

        """
        source = self._high if initial is None else initial
        u = np.array(source.values, dtype=float)
        u[:-1] = np.clip(u[:-1], self._low.values[:-1], self._high.values[:-1])
        u[-1] = self._boundary_value
        return u

######################################################################

def _regularized_power(s: np.ndarray, a: float, eps: float) -> np.ndarray:
    """(s^2 + eps^2)^(a/2), a smooth stand-in for |s|^a."""
    return (s * s + eps * eps) ** (0.5 * a)

def _regularized_slope(s: np.ndarray, a: float, eps: float) -> np.ndarray:
    """Derivative of the regularized power."""
    return a * s * (s * s + eps * eps) ** (0.5 * a - 1.0)

def _residual_values(u: np.ndarray, bp: BallProblem) -> np.ndarray:
    """Residual of the discrete equations for nodal values u."""
    positive = u[:-1] > 0.0
    if not np.all(positive):
        node = int(np.flatnonzero(~positive)[0])
        raise NonpositiveIterateError(node, float(u[node]))
    grid = bp.grid
    h = grid.spacing
    r = grid.nodes[1:-1]
    problem = bp.problem
    dimension = problem.dimension
    p = bp.p_values
    q = bp.q_values
    source = p[:-1] * u[:-1] ** -problem.gamma
    result = np.empty_like(u)
    second = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    slope = (u[2:] - u[:-2]) / (2.0 * h)
    result[1:-1] = -(second + (dimension - 1) / r * slope)
    result[0] = -2.0 * dimension * (u[1] - u[0]) / (h * h)
    if not bp.drop_gradient:
        a = problem.a
        eps = bp.gradient_eps
        result[1:-1] += q[1:-1] * _regularized_power(slope, a, eps)
        result[0] += q[0] * _regularized_power(np.float64(0.0), a, eps)
    result[:-1] -= source
    result[-1] = u[-1] - bp.boundary_value
    return result

def nonlinear_residual(u: RadialProfile, bp: BallProblem) -> RadialProfile:
    """Residual F(u) of the discrete equations at every node.

    F_i = -Lap_h u_i + q_i (D_h u_i^2 + eps^2)^(a/2) - p_i u_i^(-gamma)
    at the nodes 0..M, with D_h u_0 = 0 by symmetry, and u - b on the
    sphere.

    """
    return RadialProfile(bp.grid, _residual_values(u.values, bp))

def _jacobian_bands(u: np.ndarray, bp: BallProblem) -> np.ndarray:
    """Tridiagonal Jacobian of the residual in banded form."""
    grid = bp.grid
    h = grid.spacing
    r = grid.nodes[1:-1]
    problem = bp.problem
    dimension = problem.dimension
    gamma = problem.gamma
    p = bp.p_values
    size = len(u)
    inv_h2 = 1.0 / (h * h)
    drift = (dimension - 1) / (2.0 * h * r)
    bands = np.zeros((3, size))
    bands[1, :-1] = gamma * p[:-1] * u[:-1] ** (-gamma - 1.0)
    bands[1, 0] += 2.0 * dimension * inv_h2
    bands[1, 1:-1] += 2.0 * inv_h2
    bands[1, -1] = 1.0
    bands[0, 1] = -2.0 * dimension * inv_h2
    upper = -inv_h2 - drift
    lower = -inv_h2 + drift
    if not bp.drop_gradient:
        slope = (u[2:] - u[:-2]) / (2.0 * h)
        coupling = (
            bp.q_values[1:-1] *
            _regularized_slope(slope, problem.a, bp.gradient_eps) /
            (2.0 * h)
        )
        upper = upper + coupling
        lower = lower - coupling
    # Row i couples to i+1 through bands[0, i+1] and to i-1 through
    # bands[2, i-1].
    bands[0, 2:] = upper
    bands[2, :-2] = lower
    return bands

def jacobian(u: RadialProfile, bp: BallProblem) -> np.ndarray:
    """Jacobian of the residual at u, in the banded form of solve_banded."""
    return _jacobian_bands(u.values, bp)

######################################################################

class SolveReport:
    """History of one Newton solve."""

    def __init__(
            self,
            residual_history: List[float],
            bracket_projections: int,
            damping_events: int,
            gradient_eps: float,
            converged: bool,
            polished: bool = False,
    ):
        """Initialize with the history of the run."""
        self._history = np.array(residual_history, dtype=float)
        self._projections = bracket_projections
        self._damping = damping_events
        self._gradient_eps = gradient_eps
        self._converged = converged
        self._polished = polished

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, str(self))

    def __str__(self) -> str:
        """Summarize the run."""
        return (
            f"{self.iterations} iterations, residual "
            f"{self.final_residual:.3g}, {self._projections} projections, "
            f"{self._damping} damping events"
        )

    @property
    def iterations(self) -> int:
        """Number of Newton steps taken, polishing excluded."""
        return len(self._history) - 1 - int(self._polished)

    @property
    def residual_history(self) -> np.ndarray:
        """Max-norm residual before the first and after every step."""
        return self._history

    @property
    def final_residual(self) -> float:
        """Max-norm residual of the returned iterate."""
        return float(self._history[-1])

    @property
    def bracket_projections(self) -> int:
        """Number of nodal values clamped into the bracket."""
        return self._projections

    @property
    def damping_events(self) -> int:
        """Number of step halvings of the line search."""
        return self._damping

    @property
    def gradient_eps(self) -> float:
        """Regularization of the gradient term used."""
        return self._gradient_eps

    @property
    def converged(self) -> bool:
        """True if the residual tolerance was met."""
        return self._converged

    @property
    def polished(self) -> bool:
        """True if a polishing step was taken after convergence."""
        return self._polished

    @property
    def heavily_damped(self) -> bool:
        """True if the steps were halved more often than taken."""
        return self._damping > max(self.iterations, 1)

    def as_dict(self) -> Dict[str, Any]:
        """Plain data form for reports."""
        return {
            'iterations': self.iterations,
            'residual_history': self._history.tolist(),
            'final_residual': self.final_residual,
            'bracket_projections': self._projections,
            'damping_events': self._damping,
            'gradient_eps': self._gradient_eps,
            'converged': self._converged,
            'polished': self._polished,
            'heavily_damped': self.heavily_damped,
        }

class _Projector:
    """Clamps trial iterates into the bracket, counting the clamped nodes."""

    def __init__(self, bp: BallProblem):
        """Initialize with the bracket of the problem."""
        self._low = bp.bracket_low.values[:-1]
        self._high = bp.bracket_high.values[:-1]

    def __call__(self, u: np.ndarray) -> Tuple[np.ndarray, int]:
        """Return the projected copy and the number of clamped nodes."""
        result = u.copy()
        inner = u[:-1]
        clipped = np.clip(inner, self._low, self._high)
        count = int(np.count_nonzero(clipped != inner))
        result[:-1] = clipped
        return result, count

def _max_norm(values: np.ndarray) -> float:
    """Maximum norm."""
    return float(np.max(np.abs(values)))

def solve_ball(
        bp: BallProblem,
        tol: float = 1e-9,
        max_iter: int = 100,
        initial: Optional[RadialProfile] = None,
) -> Tuple[RadialProfile, SolveReport]:
    """Solve the ball problem by damped, bracket-projected Newton.

    Each Newton step is shortened by halving until the max-norm
    residual of the projected trial decreases by the Armijo factor;
    a step shorter than MIN_STEP ends the run as not converged.
    After the tolerance is met one more full step is tried and kept
    if it does not increase the residual.  The iteration starts from
    the supersolution unless an initial profile is given.

    """
    bp.check_bracket()
    project = _Projector(bp)
    u = bp.starting_values(initial)
    residual = _residual_values(u, bp)
    norm = _max_norm(residual)
    history = [norm]
    projections = 0
    damping = 0
    while norm >= tol:
        if len(history) > max_iter:
            report = SolveReport(history, projections, damping,
                                 bp.gradient_eps, False)
            raise MaxIterationsError(report)
        step = solve_banded((1, 1), _jacobian_bands(u, bp), -residual)
        t = 1.0
        while True:
            trial, clamped = project(u + t * step)
            trial_residual = _residual_values(trial, bp)
            trial_norm = _max_norm(trial_residual)
            if trial_norm <= (1.0 - ARMIJO * t) * norm:
                break
            t *= 0.5
            damping += 1
            if t < MIN_STEP:
                report = SolveReport(history, projections, damping,
                                     bp.gradient_eps, False)
                raise StalledLineSearchError(report)
        u, residual, norm = trial, trial_residual, trial_norm
        projections += clamped
        history.append(norm)
        if Debug.is_enabled():
            log_debug(f"Newton step {len(history) - 1}: t={t:g}, "
                      f"residual={norm:.3g}")
    polished = False
    if len(history) > 1:
        step = solve_banded((1, 1), _jacobian_bands(u, bp), -residual)
        trial, clamped = project(u + step)
        trial_residual = _residual_values(trial, bp)
        trial_norm = _max_norm(trial_residual)
        if trial_norm <= norm:
            u, norm = trial, trial_norm
            projections += clamped
            history.append(norm)
            polished = True
    report = SolveReport(history, projections, damping, bp.gradient_eps,
                         True, polished)
    if report.heavily_damped:
        log_warning(f"heavy damping on {bp!r}: {report}")
    return RadialProfile(bp.grid, u), report

######################################################################

class GradientComparison:
    """Solutions with and without the gradient term on the same ball."""

    def __init__(
            self,
            full: RadialProfile,
            pure: RadialProfile,
            full_report: SolveReport,
            pure_report: SolveReport,
    ):
        """Initialize with the two solutions and their reports."""
        self._full = full
        self._pure = pure
        self._full_report = full_report
        self._pure_report = pure_report

    def __repr__(self) -> str:
        """Represent as string."""
        content = f"excess={self.max_excess:.3g}, gap={self.max_gap:.3g}"
        return class_str(self, content)

    @property
    def full(self) -> RadialProfile:
        """Solution of the equation with the gradient term."""
        return self._full

    @property
    def pure(self) -> RadialProfile:
        """Solution of the equation without the gradient term."""
        return self._pure

    @property
    def full_report(self) -> SolveReport:
        """Report of the solve with the gradient term."""
        return self._full_report

    @property
    def pure_report(self) -> SolveReport:
        """Report of the solve without the gradient term."""
        return self._pure_report

    @property
    def max_excess(self) -> float:
        """Largest amount by which the full solution exceeds the pure one."""
        return float(np.max(self._full.values - self._pure.values))

    @property
    def max_gap(self) -> float:
        """Largest amount by which the pure solution exceeds the full one."""
        return float(np.max(self._pure.values - self._full.values))

    @property
    def ordered(self) -> bool:
        """True if the full solution lies below the pure one."""
        return self.max_excess <= ORDER_TOL

def compare_gradient_effect(
        bp: BallProblem,
        tol: float = 1e-9,
        max_iter: int = 100,
) -> GradientComparison:
    """Solve the ball problem with and without the gradient term.

    The gradient term is absorbing, so the solution without it is a
    supersolution of the full problem and lies above its solution.

    """
    full_problem = bp
    if bp.drop_gradient:
        full_problem = BallProblem(
            bp.problem, bp.grid, bp.bracket_low, bp.bracket_high,
            bp.boundary_value, bp.p_spec, False, bp.gradient_eps,
        )
    full, full_report = solve_ball(full_problem, tol, max_iter)
    pure, pure_report = solve_ball(full_problem.without_gradient(), tol, max_iter)
    return GradientComparison(full, pure, full_report, pure_report)
