"""Self test against the manufactured solution (1 + r^2)^(-1/2)."""

import math

from typing import (
    Any,
    Dict,
    List,
    Sequence,
)

import numpy as np

from ..debug import Debug

from ..define import (
    ManufacturedPotential,
    Problem,
    audit_grid,
)

from ..discretize import RadialGrid

from ..errors import UnsupportedInstanceError

from ..util import (
    class_str,
    float_list_str,
    log_info,
)

from .ball import (
    SolveReport,
    solve_ball,
)

from .exhaust import (
    ExhaustionConfig,
    Setup,
)

######################################################################

# Ball radius of the self test.
VERIFY_RADIUS = 20.0

class ConvergenceStudy:
    """Errors of ball solves against the exact solution on refined grids."""

    def __init__(
            self,
            radius: float,
            spacings: Sequence[float],
            errors: Sequence[float],
            reports: Sequence[SolveReport],
    ):
        """Initialize with the spacings and the max-norm errors."""
        self._radius = radius
        self._spacings = list(spacings)
        self._errors = list(errors)
        self._reports = list(reports)

    def __repr__(self) -> str:
        """Represent as string."""
        content = (
            f"h={float_list_str(self._spacings)}, "
            f"errors={float_list_str(self._errors)}, order={self.order:.3g}"
        )
        return class_str(self, content)

    @property
    def radius(self) -> float:
        """Radius of the ball."""
        return self._radius

    @property
    def spacings(self) -> List[float]:
        """Grid spacings, coarsest first."""
        return list(self._spacings)

    @property
    def errors(self) -> List[float]:
        """Max-norm errors against the exact solution."""
        return list(self._errors)

    @property
    def reports(self) -> List[SolveReport]:
        """Newton reports of the solves."""
        return list(self._reports)

    @property
    def order(self) -> float:
        """Observed order between the last two grids."""
        coarse, fine = self._errors[-2:]
        ratio = self._spacings[-2] / self._spacings[-1]
        return math.log(coarse / fine) / math.log(ratio)

    def as_dict(self) -> Dict[str, Any]:
        """Plain data form for reports."""
        return {
            'radius': self._radius,
            'spacings': self._spacings,
            'errors': self._errors,
            'order': self.order,
            'solves': [report.as_dict() for report in self._reports],
        }

def _check_manufactured(problem: Problem) -> ManufacturedPotential:
    """Return the manufactured source term of the problem."""
    p_spec = problem.p_spec
    if not isinstance(p_spec, ManufacturedPotential):
        raise UnsupportedInstanceError(
            "the self test needs the manufactured source term")
    q = np.asarray(problem.q_spec.evaluate(audit_grid()))
    if not np.allclose(q, p_spec.q0, rtol=1e-14, atol=0.0):
        raise UnsupportedInstanceError(
            f"the manufactured source term is built for q = {p_spec.q0!r}")
    return p_spec

def verify_manufactured(
        problem: Problem,
        config: ExhaustionConfig,
        radius: float = VERIFY_RADIUS,
) -> ConvergenceStudy:
    """Solve on one ball at spacings 2h and h with exact boundary data.

    The errors against the exact solution give the observed order of
    the discretization.

    """
    p_spec = _check_manufactured(problem)
    setup = Setup(problem, config)
    spacings = [2.0 * config.h, config.h]
    errors: List[float] = []
    reports: List[SolveReport] = []
    boundary = float(p_spec.exact_solution(radius))
    for spacing in spacings:
        grid = RadialGrid.with_spacing(radius, spacing)
        barrier = setup.barrier(grid)
        bp = setup.ball_problem(grid, barrier, boundary)
        u, report = solve_ball(bp, config.newton_tol, config.max_iter)
        exact = np.asarray(p_spec.exact_solution(grid.nodes))
        errors.append(float(np.max(np.abs(u.values - exact))))
        reports.append(report)
    study = ConvergenceStudy(radius, spacings, errors, reports)
    if Debug.is_enabled():
        log_info(f"Self test: {study}")
    return study
