"""Improper radial integrals of the majorant.

Three kinds of integrals are computed here: the decay moment of the
majorant over [0, inf) (with a verdict on its convergence), the
barrier constant as a double integral, and the cumulative form of the
same double integral on a grid.

"""

import math

from enum import Enum

from typing import (
    Callable,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from numpy.polynomial.legendre import leggauss
from scipy.integrate import (
    quad,
    simpson,
)

from ..debug import Debug

from ..errors import (
    CrossCheckError,
    DivergentPotentialError,
)

from ..util import (
    class_str,
    log_debug,
    log_warning,
)

######################################################################

# Radial function, vectorized over arrays of radii.
RadialFunction = Callable[[np.ndarray], np.ndarray]

# Number of doublings of the truncation radius.
DOUBLINGS = 20

# Growth over five non-shrinking doublings that signals divergence.
DIVERGENCE_MARGIN = 1.0

# Increment ratio below which the tail is taken to shrink geometrically.
SHRINK_RATIO = 0.9

# Consecutive agreeing estimates needed for convergence.
AGREEING_STEPS = 3

# Consecutive non-shrinking increments needed for divergence.
GROWING_STEPS = 5

# Panel counts of the composite Simpson rule on one segment.
SIMPSON_START = 16
SIMPSON_MAX = 1 << 16
SIMPSON_TOL = 1.0e-13

# Dyadic segments of the outer integral of the barrier constant.
OUTER_SEGMENTS = 40

# Gauss-Legendre rules: a long one for partial dyadic segments and a
# short one for grid intervals.
_LONG_RULE = leggauss(40)
_SHORT_RULE = leggauss(8)

######################################################################

class Classification(Enum):
    """Outcome of the decay test."""
    CONVERGENT = 'convergent'
    DIVERGENT = 'divergent'
    INDETERMINATE = 'indeterminate'

class IntegrabilityVerdict:
    """Verdict on the convergence of an improper integral."""

    def __init__(
            self,
            classification: Classification,
            value_estimate: float,
            tail_bound_used: float,
            error_estimate: float,
            partials: Sequence[float] = (),
    ):
        """Initialize the verdict."""
        self._classification = classification
        self._value_estimate = value_estimate
        self._tail_bound_used = tail_bound_used
        self._error_estimate = error_estimate
        self._partials = tuple(partials)

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, str(self))

    def __str__(self) -> str:
        """Describe the verdict in one line."""
        return (
            f"{self._classification.value}, "
            f"estimate={self._value_estimate:.12g}, "
            f"T={self._tail_bound_used:g}, "
            f"error={self._error_estimate:.3g}"
        )

    @property
    def classification(self) -> Classification:
        """Convergent, divergent or indeterminate."""
        return self._classification

    @property
    def is_convergent(self) -> bool:
        """True if the integral was found to converge."""
        return self._classification is Classification.CONVERGENT

    @property
    def value_estimate(self) -> float:
        """Estimate of the value (the last partial if not convergent)."""
        return self._value_estimate

    @property
    def tail_bound_used(self) -> float:
        """Truncation radius at which the verdict was reached."""
        return self._tail_bound_used

    @property
    def error_estimate(self) -> float:
        """Relative disagreement of the last accelerated estimates."""
        return self._error_estimate

    @property
    def partials(self) -> Tuple[float, ...]:
        """Partial integrals up to each truncation radius."""
        return self._partials

######################################################################

def segment_integral(f: RadialFunction, lo: float, hi: float) -> float:
    """Integrate over one segment by composite Simpson with doubling.

    The panel count is doubled until two successive sums agree, and
    the last sum is improved by Richardson extrapolation.

    """
    panels = SIMPSON_START
    xs = np.linspace(lo, hi, panels + 1)
    previous = float(simpson(f(xs), dx=(hi - lo) / panels))
    while True:
        panels *= 2
        xs = np.linspace(lo, hi, panels + 1)
        current = float(simpson(f(xs), dx=(hi - lo) / panels))
        change = current - previous
        if abs(change) < SIMPSON_TOL * (1.0 + abs(current)):
            break
        if panels >= SIMPSON_MAX:
            log_warning(f"Simpson rule on [{lo:g}, {hi:g}] has not settled")
            break
        previous = current
    return current + change / 15.0

def _doubling_boundaries(start: float, base: float, doublings: int) -> List[float]:
    """Truncation radii of the doubling sequence."""
    if start == 0.0:
        return [0.0] + [base * 2.0 ** k for k in range(doublings + 1)]
    return [start * 2.0 ** k for k in range(doublings + 1)]

def doubling_integral(
        f: RadialFunction,
        tol: float,
        start: float = 0.0,
        base: float = 1.0,
        doublings: int = DOUBLINGS,
        margin: float = DIVERGENCE_MARGIN,
) -> IntegrabilityVerdict:
    """Classify and estimate the integral of f over [start, inf).

    The truncation radius is doubled and each new segment integrated
    separately.  While the increments shrink geometrically the tail is
    estimated by Aitken's extrapolation.  The integral converges when
    three consecutive estimates agree to tol (1 + |estimate|), and
    diverges when five consecutive increments do not shrink and add up
    to more than the margin.

    """
    bounds = _doubling_boundaries(start, base, doublings)
    partials = [0.0]
    increments: List[float] = []
    estimates = [0.0]
    changes: List[float] = []
    agreeing = 0
    growing = 0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        increment = segment_integral(f, lo, hi)
        partial = partials[-1] + increment
        estimate = partial
        if increments and increments[-1] != 0.0:
            ratio = increment / increments[-1]
            if 0.0 < ratio < SHRINK_RATIO:
                estimate = partial + increment * ratio / (1.0 - ratio)
            growing = growing + 1 if ratio >= SHRINK_RATIO else 0
        else:
            growing = 0
        increments.append(increment)
        partials.append(partial)
        change = abs(estimate - estimates[-1]) / (1.0 + abs(estimate))
        estimates.append(estimate)
        changes.append(change)
        if Debug.is_enabled():
            log_debug(f"T={hi:g}: partial={partial:.15g}, "
                      f"estimate={estimate:.15g}")
        agreeing = agreeing + 1 if change < tol else 0
        if agreeing >= AGREEING_STEPS:
            return IntegrabilityVerdict(
                Classification.CONVERGENT, estimate, hi,
                max(changes[-AGREEING_STEPS:]), partials[1:])
        if (growing >= GROWING_STEPS and
                partial - partials[-1 - GROWING_STEPS] > margin):
            return IntegrabilityVerdict(
                Classification.DIVERGENT, partial, hi,
                changes[-1], partials[1:])
    return IntegrabilityVerdict(
        Classification.INDETERMINATE, estimates[-1], bounds[-1],
        changes[-1], partials[1:])

def check_integrability(
        phi: RadialFunction,
        tol: float = 1e-8,
        base: float = 1.0,
        margin: float = DIVERGENCE_MARGIN,
) -> IntegrabilityVerdict:
    """Decide whether the moment of r Phi(r) over [0, inf) is finite."""
    def moment(r: np.ndarray) -> np.ndarray:
        return r * np.asarray(phi(r))
    verdict = doubling_integral(moment, tol, base=base, margin=margin)
    if Debug.is_enabled():
        log_debug(f"Integrability: {verdict}")
    return verdict

def tail_moment(phi: RadialFunction, radius: float, tol: float = 1e-8) -> float:
    """Moment of r Phi(r) over [radius, inf)."""
    def moment(r: np.ndarray) -> np.ndarray:
        return r * np.asarray(phi(r))
    verdict = doubling_integral(moment, tol, start=radius)
    if not verdict.is_convergent:
        raise DivergentPotentialError(verdict)
    return max(verdict.value_estimate, 0.0)

######################################################################

def _gauss_legendre(
        f: RadialFunction,
        lo: np.ndarray,
        hi: np.ndarray,
        rule: Tuple[np.ndarray, np.ndarray],
) -> np.ndarray:
    """Gauss-Legendre sums over the intervals [lo, hi], vectorized."""
    nodes, weights = rule
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    points = lo[..., np.newaxis] + half[..., np.newaxis] * (nodes + 1.0)
    return half * (np.asarray(f(points)) * weights).sum(axis=-1)

class _InnerIntegral:
    """The map z -> integral of s^(N-1) Phi(s) over [0, z].

    Values at the powers of two are cached; the partial dyadic
    segment up to z is integrated by a long Gauss-Legendre rule.

    """

    def __init__(self, phi: RadialFunction, dimension: int):
        """Initialize for the majorant and the dimension."""
        self._phi = phi
        self._power = dimension - 1
        self._cache: Dict[int, float] = {}

    def integrand(self, s: np.ndarray) -> np.ndarray:
        """The weighted majorant s^(N-1) Phi(s)."""
        return s ** self._power * np.asarray(self._phi(s))

    def at_power(self, exponent: int) -> float:
        """Value at 2^exponent, for exponent >= 0."""
        cache = self._cache
        if exponent not in cache:
            if exponent == 0:
                lower, previous = 0.0, 0.0
            else:
                lower, previous = 2.0 ** (exponent - 1), self.at_power(exponent - 1)
            upper = 2.0 ** exponent
            increment, _ = quad(lambda s: float(self.integrand(s)),
                                lower, upper, epsabs=0.0, epsrel=1e-12,
                                limit=200)
            cache[exponent] = previous + increment
        return cache[exponent]

    def __call__(self, z: float) -> float:
        """Evaluate at z >= 0."""
        if z <= 0.0:
            return 0.0
        _, exponent = math.frexp(z)
        if exponent <= 0:
            lower, base = 0.0, 0.0
        else:
            lower = 2.0 ** (exponent - 1)
            base = self.at_power(exponent - 1)
        partial = _gauss_legendre(self.integrand, np.array(lower),
                                  np.array(z), _LONG_RULE)
        return base + float(partial)

def nested_decay_integral(phi: RadialFunction, dimension: int) -> float:
    """Barrier constant by direct nested quadrature.

    The outer integral of z^(1-N) I(z) runs over [0, 1] and the dyadic
    segments up to 2^40; the remainder beyond is closed by
    2^(40(2-N)) I(2^40) / (N-2).

    """
    inner = _InnerIntegral(phi, dimension)
    def integrand(z: float) -> float:
        if z <= 0.0:
            return 0.0
        return z ** (1 - dimension) * inner(z)
    total = 0.0
    bounds = [0.0] + [2.0 ** k for k in range(OUTER_SEGMENTS + 1)]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        value, _ = quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-10,
                        limit=200)
        total += value
    last = bounds[-1]
    total += last ** (2 - dimension) * inner(last) / (dimension - 2)
    return total

def compute_K(
        phi: RadialFunction,
        dimension: int,
        tol: float = 1e-8,
        verdict: Optional[IntegrabilityVerdict] = None,
) -> Tuple[float, float]:
    """Compute the barrier constant as a double and as a single integral.

    Returns the pair (nested, reduced).  The two are bound to agree by
    integration by parts; disagreement beyond 10 tol (1 + reduced)
    raises CrossCheckError.

    """
    if dimension < 3:
        raise ValueError(f"dimension must be at least 3, got {dimension}")
    if verdict is None:
        verdict = check_integrability(phi, tol)
    if not verdict.is_convergent:
        raise DivergentPotentialError(verdict)
    reduced = verdict.value_estimate / (dimension - 2)
    nested = nested_decay_integral(phi, dimension)
    if abs(nested - reduced) > 10.0 * tol * (1.0 + reduced):
        raise CrossCheckError(
            f"barrier constant disagrees: nested {nested!r}, "
            f"reduced {reduced!r}")
    if Debug.is_enabled():
        log_debug(f"K: nested={nested:.15g}, reduced={reduced:.15g}")
    return nested, reduced

######################################################################

def decay_profile(
        phi: RadialFunction,
        dimension: int,
        nodes: np.ndarray,
        tol: float = 1e-8,
) -> np.ndarray:
    """Integral of z^(1-N) I(z) over [r, inf) at every node r.

    Inner and outer integrals over each grid interval use nested
    Gauss-Legendre rules.  The contribution of [R, inf), R being the
    last node, is exact up to the moment of the majorant beyond R:

        (R^(2-N) I(R) + integral of r Phi(r) over [R, inf)) / (N - 2)

    The result is accumulated from the outside in and is therefore
    nonincreasing when Phi is nonnegative.

    """
    nodes = np.asarray(nodes, dtype=float)
    power = dimension - 1
    def integrand(s: np.ndarray) -> np.ndarray:
        return s ** power * np.asarray(phi(s))
    lo = nodes[:-1]
    hi = nodes[1:]
    increments = _gauss_legendre(integrand, lo, hi, _SHORT_RULE)
    cumulative = np.concatenate(([0.0], np.cumsum(increments)))
    # Nodes of the outer rule in each interval.
    rule_nodes, rule_weights = _SHORT_RULE
    half = 0.5 * (hi - lo)
    outer = lo[:, np.newaxis] + half[:, np.newaxis] * (rule_nodes + 1.0)
    starts = np.broadcast_to(lo[:, np.newaxis], outer.shape)
    inner = cumulative[:-1, np.newaxis] + _gauss_legendre(
        integrand, starts, outer, _SHORT_RULE)
    psi = outer ** (1 - dimension) * inner
    pieces = half * (psi * rule_weights).sum(axis=-1)
    radius = float(nodes[-1])
    tail = (
        radius ** (2 - dimension) * cumulative[-1] +
        tail_moment(phi, radius, tol)
    ) / (dimension - 2)
    reversed_sums = np.cumsum(np.concatenate(([tail], pieces[::-1])))
    return reversed_sums[::-1]
