"""First Dirichlet eigenpair of the radial Laplacian and subsolution scaling."""

from typing import Optional

import numpy as np

from scipy.linalg import solve_banded

from ..debug import Debug

from ..errors import (
    EigenNonconvergenceError,
    EpsilonUnderflowError,
    SubsolutionViolationError,
)

from ..define import (
    PotentialSpec,
    Problem,
    majorant,
    solve_potential,
)

from ..util import (
    class_str,
    log_debug,
)

from .grid import (
    RadialGrid,
    RadialProfile,
    central_gradient,
    laplacian_bands,
)

######################################################################

# Iteration cap of inverse iteration.
EIGEN_MAX_ITER = 10_000

# Below this the subsolution scale is considered to have underflowed.
EPSILON_FLOOR = 1.0e-300

# Bisection steps between the last failing and first passing scale.
EPSILON_BISECTIONS = 40

class EigenPair:
    """First eigenvalue and positive eigenfunction of -Laplacian on a ball."""

    def __init__(self, lambda1: float, phi1: RadialProfile, iterations: int = 0):
        """Initialize with the eigenvalue and the normalized eigenfunction."""
        self._lambda1 = lambda1
        self._phi1 = phi1
        self._iterations = iterations

    def __repr__(self) -> str:
        """Represent as string."""
        content = f"lambda1={self._lambda1:.12g}, {self._phi1.grid!r}"
        return class_str(self, content)

    @property
    def lambda1(self) -> float:
        """First Dirichlet eigenvalue."""
        return self._lambda1

    @property
    def phi1(self) -> RadialProfile:
        """First eigenfunction, with maximum 1 and zero on the sphere."""
        return self._phi1

    @property
    def grid(self) -> RadialGrid:
        """Grid of the eigenfunction."""
        return self._phi1.grid

    @property
    def iterations(self) -> int:
        """Number of inverse iteration steps taken."""
        return self._iterations

def first_eigenpair(
        grid: RadialGrid,
        dimension: int,
        tol: float = 1e-12,
        max_iter: int = EIGEN_MAX_ITER,
) -> EigenPair:
    """Compute the first eigenpair of the discrete Dirichlet Laplacian.

    Inverse iteration with tridiagonal solves.  The eigenvalue estimate
    of each step is x.x / x.y with y the solution of A y = x, which is
    free of the cancellation that plagues x.Ax on fine grids.  The
    iteration stops when two successive estimates differ by less than
    tol (1 + |estimate|).

    """
    bands = laplacian_bands(grid, dimension)
    size = grid.interior + 1
    # Start from a positive profile vanishing at the sphere.
    x = np.cos(0.5 * np.pi * grid.nodes[:size] / grid.radius)
    x /= np.linalg.norm(x)
    previous = np.inf
    estimate = np.inf
    for iteration in range(1, max_iter + 1):
        y = solve_banded((1, 1), bands, x)
        estimate = float(np.dot(x, x) / np.dot(x, y))
        x = y / np.linalg.norm(y)
        if abs(estimate - previous) < tol * (1.0 + abs(estimate)):
            break
        previous = estimate
    else:
        raise EigenNonconvergenceError(
            f"inverse iteration on {grid!r} did not settle in "
            f"{max_iter} steps (last estimate {estimate!r})")
    values = np.zeros(len(grid))
    values[:size] = x
    # The eigenvector is only defined up to sign.
    values *= np.sign(values[np.argmax(np.abs(values))])
    values /= values[:-1].max()
    if not np.all(values[:-1] > 0.0):
        raise EigenNonconvergenceError(
            f"eigenfunction on {grid!r} is not positive")
    if Debug.is_enabled():
        log_debug(f"lambda1 = {estimate:.12g} on {grid!r} "
                  f"after {iteration} steps")
    return EigenPair(estimate, RadialProfile(grid, values), iteration)

######################################################################

class _SubsolutionTest:
    """Discrete subsolution inequality for the scaled eigenfunction."""

    def __init__(
            self,
            problem: Problem,
            eig: EigenPair,
            p_spec: PotentialSpec,
    ):
        """Precompute the nodal data."""
        grid = eig.grid
        r = grid.nodes[1:-1]
        self._lambda1 = eig.lambda1
        self._phi = eig.phi1.interior_values
        self._slope = np.abs(central_gradient(eig.phi1)) ** problem.a
        self._p = np.asarray(p_spec.evaluate(r))
        self._q = np.asarray(problem.q_spec.evaluate(r))
        self._gamma = problem.gamma
        self._a = problem.a

    def holds(self, epsilon: float) -> bool:
        """Check the inequality at every interior node."""
        phi = self._phi
        with np.errstate(over='ignore', under='ignore'):
            lhs = (
                epsilon * self._lambda1 * phi +
                self._q * epsilon ** self._a * self._slope
            )
            rhs = self._p * (epsilon * phi) ** -self._gamma
        return bool(np.all(lhs <= rhs))

def choose_epsilon(
        problem: Problem,
        eig: EigenPair,
        grid: RadialGrid,
        p_spec: Optional[PotentialSpec] = None,
) -> float:
    """Find a scale for which epsilon * phi1 is a discrete subsolution.

    The scale is halved from 1 until the inequality

        eps lambda1 phi1 + q eps^a |phi1'|^a <= p eps^(-gamma) phi1^(-gamma)

    holds at every interior node, then refined by bisection between the
    last failing and the first passing value.  The potential defaults to
    the one the ball solves use.

    """
    if grid != eig.grid:
        raise ValueError(f"eigenpair is on {eig.grid!r}, not on {grid!r}")
    if p_spec is None:
        p_spec = solve_potential(problem, majorant(problem))
    test = _SubsolutionTest(problem, eig, p_spec)
    passed = 1.0
    failed: Optional[float] = None
    while not test.holds(passed):
        failed = passed
        passed *= 0.5
        if passed < EPSILON_FLOOR:
            raise EpsilonUnderflowError(
                f"no subsolution scale above {EPSILON_FLOOR:g} on {grid!r}")
    if failed is not None:
        for _ in range(EPSILON_BISECTIONS):
            middle = 0.5 * (passed + failed)
            if middle in (passed, failed):
                break
            if test.holds(middle):
                passed = middle
            else:
                failed = middle
    if not test.holds(passed):
        raise SubsolutionViolationError(
            f"subsolution inequality fails at epsilon = {passed!r} on {grid!r}")
    if Debug.is_enabled():
        log_debug(f"epsilon = {passed:.6g} on {grid!r}")
    return passed
