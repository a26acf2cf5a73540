"""Entire solution as the monotone limit of ball solutions."""

from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from ..barrier import (
    BarrierData,
    IntegrabilityVerdict,
    check_integrability,
    compute_K,
    compute_barrier,
    verify_supersolution,
)

from ..debug import Debug

from ..define import (
    MajorantProfile,
    PotentialSpec,
    Problem,
    ValidationReport,
    majorant,
    solve_potential,
    validate_problem,
)

from ..discretize import (
    RadialGrid,
    RadialProfile,
    choose_epsilon,
    first_eigenpair,
)

from ..errors import (
    DivergentPotentialError,
    InvalidProblemError,
    MonotonicityViolationError,
)

from ..util import (
    class_str,
    float_list_str,
    log_info,
    log_warning,
)

from .ball import (
    GRADIENT_EPS,
    ORDER_TOL,
    BallProblem,
    SolveReport,
    solve_ball,
)

######################################################################

class ExhaustionConfig:
    """Radius schedule and tolerances of the exhaustion by balls."""

    def __init__(
            self,
            radii: Sequence[float],
            h: float = 0.01,
            cauchy_tol: float = 2e-3,
            tail_tol: float = 0.25,
            newton_tol: float = 1e-9,
            max_iter: int = 100,
            quad_tol: float = 1e-8,
            eigen_tol: float = 1e-12,
            slack_factor: float = 2.0,
            gradient_eps: float = GRADIENT_EPS,
    ):
        """Initialize the configuration, checking its consistency."""
        radii = [float(radius) for radius in radii]
        if not radii:
            raise ValueError("radius schedule is empty")
        if radii[0] <= 0.0:
            raise ValueError(f"radii must be positive, got {radii[0]!r}")
        for first, second in zip(radii[:-1], radii[1:]):
            if not second > first:
                raise ValueError(
                    f"radii must increase strictly: {first!r}, {second!r}")
        tolerances = {
            'h': h,
            'cauchy_tol': cauchy_tol,
            'tail_tol': tail_tol,
            'newton_tol': newton_tol,
            'quad_tol': quad_tol,
            'eigen_tol': eigen_tol,
            'slack_factor': slack_factor,
        }
        for name, value in tolerances.items():
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        if max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {max_iter!r}")
        self._radii = tuple(radii)
        self.h = h
        self.cauchy_tol = cauchy_tol
        self.tail_tol = tail_tol
        self.newton_tol = newton_tol
        self.max_iter = max_iter
        self.quad_tol = quad_tol
        self.eigen_tol = eigen_tol
        self.slack_factor = slack_factor
        self.gradient_eps = gradient_eps

    @classmethod
    def geometric(cls, R0: float = 5.0, terms: int = 8, **kwargs: Any) -> 'ExhaustionConfig':
        """Schedule R_k = R0 2^k for k = 0..terms-1."""
        return cls([R0 * 2.0 ** k for k in range(terms)], **kwargs)

    def __repr__(self) -> str:
        """Represent as string."""
        content = f"radii={float_list_str(self._radii)}, h={self.h}"
        return class_str(self, content)

    @property
    def radii(self) -> Tuple[float, ...]:
        """Radius schedule."""
        return self._radii

    @property
    def window_radius(self) -> float:
        """Radius of the comparison window, the smallest ball."""
        return self._radii[0]

    def with_radii(self, radii: Sequence[float]) -> 'ExhaustionConfig':
        """Same tolerances with another schedule."""
        return ExhaustionConfig(
            radii, self.h, self.cauchy_tol, self.tail_tol, self.newton_tol,
            self.max_iter, self.quad_tol, self.eigen_tol, self.slack_factor,
            self.gradient_eps,
        )

######################################################################

class Setup:
    """Everything about a problem that does not depend on the ball."""

    def __init__(self, problem: Problem, config: ExhaustionConfig):
        """Validate the problem and compute the barrier constants.

        Raises InvalidProblemError for an invalid problem and
        DivergentPotentialError unless the majorant decays.

        """
        checked = validate_problem(problem)
        if isinstance(checked, ValidationReport):
            raise InvalidProblemError(checked)
        self.problem = problem
        self.config = config
        self.phi: MajorantProfile = majorant(problem)
        self.p_spec: PotentialSpec = solve_potential(problem, self.phi)
        self.verdict: IntegrabilityVerdict = check_integrability(
            self.phi, config.quad_tol)
        if not self.verdict.is_convergent:
            raise DivergentPotentialError(self.verdict)
        self.constants = compute_K(
            self.phi, problem.dimension, config.quad_tol, self.verdict)

    def barrier(self, grid: RadialGrid) -> BarrierData:
        """Barrier on the grid, verified to be a discrete supersolution."""
        problem = self.problem
        barrier = compute_barrier(
            self.phi, problem.dimension, problem.gamma, grid,
            self.config.quad_tol, self.constants)
        verify_supersolution(barrier, self.phi, grid,
                             self.config.slack_factor, strict=True)
        return barrier

    def ball_problem(
            self,
            grid: RadialGrid,
            barrier: BarrierData,
            boundary_value: float = 0.0,
    ) -> BallProblem:
        """Ball problem bracketed by the scaled eigenfunction and the barrier."""
        problem = self.problem
        eig = first_eigenpair(grid, problem.dimension, self.config.eigen_tol)
        epsilon = choose_epsilon(problem, eig, grid, self.p_spec)
        phi1 = eig.phi1.values[:-1]
        v = barrier.v.values[:-1]
        # Smaller scales stay subsolutions; this keeps the bracket ordered.
        epsilon = min(epsilon, float(np.min(v / phi1)))
        low = eig.phi1.scaled(epsilon)
        return BallProblem(
            problem, grid, low, barrier.v, boundary_value, self.p_spec,
            gradient_eps=self.config.gradient_eps,
        )

######################################################################

class EntireSolution:
    """Result of the exhaustion by balls."""

    def __init__(
            self,
            profile: RadialProfile,
            radii_used: Sequence[float],
            successive_gaps: Sequence[float],
            tail_value: float,
            certified: bool,
            barrier: BarrierData,
            ball_problem: BallProblem,
            reports: Sequence[SolveReport],
            verdict: IntegrabilityVerdict,
            window_radius: float,
    ):
        """Initialize with the final profile and the diagnostics."""
        self._profile = profile
        self._radii_used = np.array(radii_used, dtype=float)
        self._gaps = np.array(successive_gaps, dtype=float)
        self._tail_value = tail_value
        self._certified = certified
        self._barrier = barrier
        self._ball_problem = ball_problem
        self._reports = list(reports)
        self._verdict = verdict
        self._window_radius = window_radius

    def __repr__(self) -> str:
        """Represent as string."""
        status = "certified" if self._certified else "uncertified"
        content = f"{status}, R={self._radii_used[-1]:g}"
        return class_str(self, content)

    @property
    def profile(self) -> RadialProfile:
        """Solution on the final ball."""
        return self._profile

    @property
    def radii_used(self) -> np.ndarray:
        """Radii of the balls solved on."""
        return self._radii_used

    @property
    def successive_gaps(self) -> np.ndarray:
        """Sup-norm differences of consecutive solutions on the window."""
        return self._gaps

    @property
    def tail_value(self) -> float:
        """Barrier at the final radius."""
        return self._tail_value

    @property
    def certified(self) -> bool:
        """True if the Cauchy and tail criteria were both met."""
        return self._certified

    @property
    def barrier(self) -> BarrierData:
        """Barrier on the final ball."""
        return self._barrier

    @property
    def ball_problem(self) -> BallProblem:
        """Ball problem of the final ball."""
        return self._ball_problem

    @property
    def reports(self) -> List[SolveReport]:
        """Newton reports of every ball solve."""
        return list(self._reports)

    @property
    def verdict(self) -> IntegrabilityVerdict:
        """Integrability verdict of the majorant."""
        return self._verdict

    @property
    def window_radius(self) -> float:
        """Radius of the comparison window."""
        return self._window_radius

    def as_dict(self) -> Dict[str, Any]:
        """Plain data form for reports."""
        barrier = self._barrier
        return {
            'certified': self._certified,
            'radii_used': self._radii_used.tolist(),
            'successive_gaps': self._gaps.tolist(),
            'tail_value': self._tail_value,
            'window_radius': self._window_radius,
            'integrability': verdict_dict(self._verdict),
            'barrier': {
                'K': barrier.K,
                'K_nested': barrier.K_nested,
                'c': barrier.c,
            },
            'solves': [report.as_dict() for report in self._reports],
        }

def verdict_dict(verdict: IntegrabilityVerdict) -> Dict[str, Any]:
    """Plain data form of an integrability verdict."""
    return {
        'classification': verdict.classification.value,
        'value_estimate': verdict.value_estimate,
        'tail_bound_used': verdict.tail_bound_used,
        'error_estimate': verdict.error_estimate,
    }

def _first_violation(upper: np.ndarray, lower: np.ndarray) -> Optional[int]:
    """First node where lower exceeds upper beyond the ordering tolerance."""
    bad = np.flatnonzero(lower > upper + ORDER_TOL)
    if len(bad) == 0:
        return None
    return int(bad[0])

def solve_entire(
        problem: Problem,
        config: ExhaustionConfig,
        setup: Optional[Setup] = None,
) -> EntireSolution:
    """Solve on the balls of the schedule until the solutions settle.

    Every solution is interpolated onto the grid of the comparison
    window and checked to lie above its predecessor there and below
    the barrier everywhere.  The run is certified as soon as the
    sup-norm gap of consecutive solutions on the window and the
    barrier on the sphere are both below their tolerances.

    """
    if setup is None:
        setup = Setup(problem, config)
    window = RadialGrid.with_spacing(config.window_radius, config.h).nodes
    previous: Optional[np.ndarray] = None
    radii_used: List[float] = []
    gaps: List[float] = []
    reports: List[SolveReport] = []
    certified = False
    for radius in config.radii:
        grid = RadialGrid.with_spacing(radius, config.h)
        barrier = setup.barrier(grid)
        bp = setup.ball_problem(grid, barrier)
        u, report = solve_ball(bp, config.newton_tol, config.max_iter)
        radii_used.append(radius)
        reports.append(report)
        node = _first_violation(barrier.v.values, u.values)
        if node is not None:
            raise MonotonicityViolationError(
                "barrier domination", node,
                (float(u.values[node]), float(barrier.v.values[node])))
        current = u.sample(window)
        tail = float(barrier.v.values[-1])
        if previous is not None:
            node = _first_violation(current, previous)
            if node is not None:
                raise MonotonicityViolationError(
                    "domain monotonicity", node,
                    (float(previous[node]), float(current[node])))
            gaps.append(float(np.max(np.abs(current - previous))))
        if Debug.is_enabled():
            gap = f"{gaps[-1]:.3g}" if gaps else "-"
            log_info(f"R={radius:g}: {report}; gap {gap}, v(R)={tail:.3g}")
        if gaps and gaps[-1] < config.cauchy_tol and tail < config.tail_tol:
            certified = True
            break
        previous = current
    if not certified:
        log_warning(f"exhaustion ended uncertified at R={radii_used[-1]:g}")
    return EntireSolution(
        u, radii_used, gaps, tail, certified, barrier, bp, reports,
        setup.verdict, config.window_radius,
    )

######################################################################

class ProbeReport:
    """Agreement of two solves of the same ball problem."""

    def __init__(
            self,
            applicable: bool,
            difference: float = float('nan'),
            threshold: float = float('nan'),
            reports: Sequence[SolveReport] = (),
            radius: Optional[float] = None,
    ):
        """Initialize the report."""
        self._applicable = applicable
        self._difference = difference
        self._threshold = threshold
        self._reports = list(reports)
        self._radius = radius

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, str(self))

    def __str__(self) -> str:
        """Describe the outcome."""
        if not self._applicable:
            return "not applicable"
        status = "passed" if self.passed else "failed"
        return (
            f"{status}: difference {self._difference:.3g}, "
            f"threshold {self._threshold:.3g}"
        )

    @property
    def applicable(self) -> bool:
        """False if there was no converged run to probe."""
        return self._applicable

    @property
    def difference(self) -> float:
        """Sup-norm difference of the two solutions."""
        return self._difference

    @property
    def threshold(self) -> float:
        """Largest difference that passes."""
        return self._threshold

    @property
    def passed(self) -> bool:
        """True if the two solutions agree."""
        return self._applicable and self._difference < self._threshold

    @property
    def reports(self) -> List[SolveReport]:
        """Reports of the two solves."""
        return list(self._reports)

    @property
    def radius(self) -> Optional[float]:
        """Radius of the probed ball."""
        return self._radius

    def as_dict(self) -> Dict[str, Any]:
        """Plain data form for reports."""
        return {
            'applicable': self._applicable,
            'passed': self.passed,
            'difference': self._difference if self._applicable else None,
            'threshold': self._threshold if self._applicable else None,
            'radius': self._radius,
            'solves': [report.as_dict() for report in self._reports],
        }

def cross_initialization(
        bp: BallProblem,
        first: RadialProfile,
        second: RadialProfile,
        tol: float = 1e-9,
        max_iter: int = 100,
) -> ProbeReport:
    """Solve the ball problem from two initial iterates and compare."""
    u1, report1 = solve_ball(bp, tol, max_iter, initial=first)
    u2, report2 = solve_ball(bp, tol, max_iter, initial=second)
    difference = float(np.max(np.abs(u1.values - u2.values)))
    return ProbeReport(True, difference, 10.0 * tol, (report1, report2),
                       bp.grid.radius)

def uniqueness_probe(problem: Problem, config: ExhaustionConfig) -> ProbeReport:
    """Check that the final ball solve does not depend on the start.

    The final ball problem of the exhaustion is solved from the
    supersolution and from the midpoint of the bracket.  Runs that
    end uncertified are not probed.

    """
    solution = solve_entire(problem, config)
    if not solution.certified:
        return ProbeReport(False, radius=float(solution.radii_used[-1]))
    bp = solution.ball_problem
    high = bp.bracket_high
    middle = high.with_values(0.5 * (bp.bracket_low.values + high.values))
    report = cross_initialization(
        bp, high, middle, config.newton_tol, config.max_iter)
    if Debug.is_enabled():
        log_info(f"Uniqueness probe: {report}")
    return report
