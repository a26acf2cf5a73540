"""Explicit supersolution barrier and its discrete verification."""

from typing import (
    Optional,
    Tuple,
)

import numpy as np

from ..debug import Debug

from ..errors import (
    BarrierInvariantError,
    SupersolutionViolationError,
)

from ..define import MajorantProfile

from ..discretize import (
    RadialGrid,
    RadialProfile,
    discrete_laplacian,
)

from ..util import (
    class_str,
    log_debug,
)

from .integrals import (
    IntegrabilityVerdict,
    check_integrability,
    compute_K,
    decay_profile,
)

######################################################################

# Default multiple of the truncation estimate allowed as slack.
SLACK_FACTOR = 2.0

def barrier_height(K: float, gamma: float) -> float:
    """The constant c = (K (2 + gamma))^(1 / (1 + gamma))."""
    return (K * (2.0 + gamma)) ** (1.0 / (1.0 + gamma))

class BarrierData:
    """Sampled barrier w, v with its constants K and c."""

    def __init__(
            self,
            K: float,
            c: float,
            w: RadialProfile,
            v: RadialProfile,
            gamma: float,
            dimension: int,
            K_nested: Optional[float] = None,
    ):
        """Initialize with the constants and the sampled profiles."""
        self._K = K
        self._c = c
        self._w = w
        self._v = v
        self._gamma = gamma
        self._dimension = dimension
        self._K_nested = K if K_nested is None else K_nested

    def __repr__(self) -> str:
        """Represent as string."""
        content = f"K={self._K:.12g}, c={self._c:.12g}, {self._w.grid!r}"
        return class_str(self, content)

    @property
    def K(self) -> float:
        """Barrier constant, from the reduced single integral."""
        return self._K

    @property
    def K_nested(self) -> float:
        """Barrier constant, from the nested double integral."""
        return self._K_nested

    @property
    def c(self) -> float:
        """Height of the barrier at the origin."""
        return self._c

    @property
    def w(self) -> RadialProfile:
        """Samples of w."""
        return self._w

    @property
    def v(self) -> RadialProfile:
        """Samples of the supersolution v."""
        return self._v

    @property
    def gamma(self) -> float:
        """Singularity exponent the barrier is built for."""
        return self._gamma

    @property
    def dimension(self) -> int:
        """Spatial dimension the barrier is built for."""
        return self._dimension

    @property
    def grid(self) -> RadialGrid:
        """Grid of the samples."""
        return self._w.grid

    def check_invariants(self) -> None:
        """Raise BarrierInvariantError unless the samples are sound."""
        w = self._w.values
        v = self._v.values
        if w[0] != self._K:
            raise BarrierInvariantError(f"w(0) = {w[0]!r} differs from K")
        if np.any(w < 0.0):
            node = int(np.flatnonzero(w < 0.0)[0])
            raise BarrierInvariantError(f"w is negative at node {node}")
        for name, values in (('w', w), ('v', v)):
            rises = np.flatnonzero(np.diff(values) > np.spacing(values[:-1]))
            if len(rises) > 0:
                raise BarrierInvariantError(
                    f"{name} increases after node {int(rises[0])}")
        if abs(v[0] - self._c) > 4.0 * np.spacing(self._c):
            raise BarrierInvariantError(f"v(0) = {v[0]!r} differs from c")
        if v.max() - self._c > 4.0 * np.spacing(self._c):
            raise BarrierInvariantError(f"v exceeds c = {self._c!r}")

def compute_barrier(
        phi: MajorantProfile,
        dimension: int,
        gamma: float,
        grid: RadialGrid,
        tol: float = 1e-8,
        constants: Optional[Tuple[float, float]] = None,
        verdict: Optional[IntegrabilityVerdict] = None,
) -> BarrierData:
    """Sample the barrier on the grid.

    w(r) is the integral of z^(1-N) I(z) over [r, inf), which equals
    K minus the same integral over [0, r].  It is accumulated on the
    grid and rescaled so that w(0) = K holds exactly.  Then

        v = (c (2 + gamma) w)^(1/(2 + gamma)) = c (w/K)^(1/(2 + gamma))

    which makes v(0) = c exact and keeps v monotone.  The constants
    are the pair returned by compute_K and are computed if not given.

    """
    if constants is None:
        if verdict is None:
            verdict = check_integrability(phi, tol)
        constants = compute_K(phi, dimension, tol, verdict)
    K_nested, K = constants
    c = barrier_height(K, gamma)
    sums = decay_profile(phi, dimension, grid.nodes, tol)
    ratio = sums / sums[0]
    w = RadialProfile(grid, K * ratio)
    v = RadialProfile(grid, c * ratio ** (1.0 / (2.0 + gamma)))
    barrier = BarrierData(K, c, w, v, gamma, dimension, K_nested)
    barrier.check_invariants()
    if Debug.is_enabled():
        log_debug(f"Barrier {barrier}: v(R) = {v.values[-1]:.6g}")
    return barrier

def restrict_barrier(barrier: BarrierData, grid: RadialGrid) -> BarrierData:
    """Restrict a barrier to a smaller grid with the same nodes."""
    w = barrier.w.restricted(grid)
    v = barrier.v.restricted(grid)
    return BarrierData(barrier.K, barrier.c, w, v, barrier.gamma,
                       barrier.dimension, barrier.K_nested)

######################################################################

class SupersolutionReport:
    """Margins of the discrete supersolution inequality.

    Margins are kept at the nodes 0..M.  The allowance and the check
    cover the interior nodes 1..M only: the symmetry closure at the
    origin is first order when Phi'(0) is not zero, and the continuous
    margin vanishes there.

    """

    def __init__(
            self,
            grid: RadialGrid,
            margins: np.ndarray,
            slack: np.ndarray,
    ):
        """Initialize with margins at nodes 0..M, slacks at nodes 1..M."""
        self._grid = grid
        self._margins = margins
        self._slack = slack

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, str(self))

    def __str__(self) -> str:
        """Describe the outcome."""
        node = self.worst_node
        status = "holds" if self.passed else "violated"
        return (
            f"supersolution inequality {status}; worst node {node} "
            f"(r={self._grid.nodes[node]:.6g}) margin "
            f"{self._margins[node]:.6g}, slack {self._slack[node - 1]:.3g}"
        )

    @property
    def grid(self) -> RadialGrid:
        """Grid of the verification."""
        return self._grid

    @property
    def margins(self) -> np.ndarray:
        """Values of Laplacian(v) + Phi v^(-gamma) at the nodes 0..M."""
        return self._margins

    @property
    def slack(self) -> np.ndarray:
        """Allowed truncation slack at the nodes 1..M."""
        return self._slack

    @property
    def excess(self) -> np.ndarray:
        """Margin minus slack at the nodes 1..M."""
        return self._margins[1:] - self._slack

    @property
    def worst_node(self) -> int:
        """Interior node where margin minus slack is largest."""
        return 1 + int(np.argmax(self.excess))

    @property
    def worst_excess(self) -> float:
        """Margin minus slack at the worst node."""
        return float(self.excess[self.worst_node - 1])

    @property
    def passed(self) -> bool:
        """True if the margin is below the slack at every interior node."""
        return bool(np.all(self.excess < 0.0))

    def margin_profile(self) -> RadialProfile:
        """Margins as a profile, undefined on the sphere."""
        values = np.append(self._margins, 0.0)
        return RadialProfile(self._grid, values, boundary_defined=False)

def truncation_slack(
        v: RadialProfile,
        dimension: int,
        factor: float = SLACK_FACTOR,
) -> np.ndarray:
    """Allowance for the truncation error of the Laplacian at nodes 1..M.

    The stencil of spacing 2h has four times the leading error of the
    stencil of spacing h, so a third of their difference estimates the
    error h^2 (v''''/12 + (N-1) v'''/(6 r)) with its sign.  The wide
    stencil at node 1 reaches node -1 through the even extension of v;
    the last node takes the estimate of its neighbour.  The allowance is
    factor times the largest estimate among each node and its two
    neighbours.

    """
    grid = v.grid
    h = grid.spacing
    values = v.values
    last = len(values) - 2
    nodes = np.arange(1, last)
    r = grid.nodes[nodes]
    before = values[np.abs(nodes - 2)]
    after = values[nodes + 2]
    wide = (
        (after - 2.0 * values[nodes] + before) / (4.0 * h * h) +
        (dimension - 1) / r * (after - before) / (4.0 * h)
    )
    narrow = discrete_laplacian(v, dimension).values[1:last]
    estimate = np.abs(wide - narrow) / 3.0
    estimate = np.append(estimate, estimate[-1])
    padded = np.pad(estimate, 1, mode='edge')
    local = np.maximum(np.maximum(padded[:-2], padded[1:-1]), padded[2:])
    return factor * local

def verify_supersolution(
        barrier: BarrierData,
        phi: MajorantProfile,
        grid: RadialGrid,
        slack_factor: float = SLACK_FACTOR,
        v: Optional[RadialProfile] = None,
        strict: bool = False,
) -> SupersolutionReport:
    """Check Laplacian(v) + Phi v^(-gamma) < slack at the nodes 1..M.

    The margin at the origin is reported but not checked.  A
    replacement profile for v may be given, e.g. to check a scaled
    barrier.  In strict mode a violation raises
    SupersolutionViolationError instead of being reported.

    """
    if v is None:
        v = barrier.v
    if v.grid != grid:
        v = v.restricted(grid)
    dimension = barrier.dimension
    laplacian = discrete_laplacian(v, dimension).values[:-1]
    r = grid.nodes[:-1]
    values = v.values[:-1]
    margins = laplacian + np.asarray(phi(r)) * values ** -barrier.gamma
    slack = truncation_slack(v, dimension, slack_factor)
    report = SupersolutionReport(grid, margins, slack)
    if Debug.is_enabled():
        log_debug(str(report))
    if strict and not report.passed:
        raise SupersolutionViolationError(report)
    return report
