"""Potentials: the coefficient functions p, q and the majorant Phi."""

from abc import (
    ABCMeta,
    abstractmethod,
)

from typing import (
    Any,
    Dict,
    Mapping,
    Union,
)

import numpy as np

from ..errors import (
    PotentialEvaluationError,
    UnsupportedInstanceError,
)

from ..util import class_str

from .expression import (
    Node,
    parse_expression,
    pretty_print,
)

######################################################################

# Radii accepted by the evaluation methods: a float or an array.
Radii = Union[float, np.ndarray]

# What a potential looks like in a configuration file.
PotentialSource = Union[str, float, int, Mapping[str, Any]]

# Number of polar angles used to sample a sphere.
SPHERE_SAMPLES = 181

######################################################################

class PotentialSpec(metaclass=ABCMeta):
    """Evaluable potential.

    Radial potentials are evaluated at radii.  Non-radial potentials
    can only be sampled on spheres, as functions of the cosine of the
    polar angle.

    """

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, repr(self.source))

    @property
    @abstractmethod
    def source(self) -> PotentialSource:
        """Implement this to return the configuration form of the potential."""

    @property
    def is_radial(self) -> bool:
        """True if the potential depends on the radius alone."""
        return True

    def evaluate(self, r: Radii) -> Radii:
        """Evaluate at the given radii.

        Returns a float for a scalar argument and an array of the same
        shape otherwise.

        """
        radii = np.asarray(r, dtype=float)
        values = self._guarded(radii, 'ignore')
        if values.ndim == 0:
            return float(values)
        return values

    def underflows(self, r: float) -> bool:
        """Answer whether evaluation at r underflows to zero."""
        try:
            self._guarded(np.asarray(r, dtype=float), 'raise')
        except PotentialEvaluationError as err:
            return "underflow" in str(err)
        return False

    def sphere_values(self, r: np.ndarray, cosines: np.ndarray) -> np.ndarray:
        """Sample on spheres of the given radii.

        The result has one row per radius and one column per cosine
        of the polar angle.

        """
        values = np.asarray(self.evaluate(np.asarray(r, dtype=float)))
        return np.repeat(values[..., np.newaxis], len(cosines), axis=-1)

    def _guarded(self, radii: np.ndarray, under: str) -> np.ndarray:
        """Evaluate with floating point errors turned into exceptions."""
        with np.errstate(divide='raise', invalid='raise',
                         over='raise', under=under):
            try:
                value = self._compute(radii)
            except FloatingPointError as err:
                raise PotentialEvaluationError(
                    f"cannot evaluate {self.source!r}: {err}") from err
        return np.broadcast_to(np.asarray(value, dtype=float),
                               radii.shape).copy()

    @abstractmethod
    def _compute(self, radii: np.ndarray) -> np.ndarray:
        """Implement this to compute the values at an array of radii."""

######################################################################

class ExpressionPotential(PotentialSpec):
    """Radial potential given by an expression in ``r``."""

    def __init__(self, source: str):
        """Compile the expression."""
        self._source = source
        self._node = parse_expression(source)

    @property
    def source(self) -> str:
        """Expression text as written by the user."""
        return self._source

    @property
    def node(self) -> Node:
        """Syntax tree of the expression."""
        return self._node

    @property
    def is_constant(self) -> bool:
        """True if the expression does not mention the variable."""
        return not self._node.depends_on_variable()

    def pretty(self) -> str:
        """Fully parenthesized form of the expression."""
        return pretty_print(self._node)

    def _compute(self, radii: np.ndarray) -> np.ndarray:
        """Evaluate the syntax tree."""
        return self._node.evaluate(radii)

######################################################################

class ManufacturedPotential(PotentialSpec):
    """Source term for which u*(r) = (1 + r^2)^(-1/2) is the exact solution.

    The coefficient q must be the constant q0.  Then

        p = (-Laplacian(u*) + q0 |grad u*|^a) u*^gamma

    with -Laplacian(u*) = (1 + r^2)^(-5/2) (N + (N - 3) r^2) and
    |grad u*| = r (1 + r^2)^(-3/2).

    """

    def __init__(self, dimension: int, gamma: float, a: float, q0: float):
        """Initialize for the given problem parameters."""
        self._dimension = dimension
        self._gamma = gamma
        self._a = a
        self._q0 = q0

    @property
    def source(self) -> Dict[str, Any]:
        """Configuration form."""
        return {'family': 'manufactured', 'q0': self._q0}

    @property
    def q0(self) -> float:
        """Constant gradient coefficient the source term is built for."""
        return self._q0

    @staticmethod
    def exact_solution(r: Radii) -> Radii:
        """The manufactured solution u*."""
        radii = np.asarray(r, dtype=float)
        values = (1.0 + radii * radii) ** -0.5
        if values.ndim == 0:
            return float(values)
        return values

    def _compute(self, radii: np.ndarray) -> np.ndarray:
        """Evaluate the reverse-engineered source term."""
        dim = self._dimension
        s = 1.0 + radii * radii
        minus_laplacian = s ** -2.5 * (dim + (dim - 3) * radii * radii)
        gradient = radii * s ** -1.5
        total = minus_laplacian + self._q0 * gradient ** self._a
        return total * s ** (-0.5 * self._gamma)

######################################################################

class DipolePotential(PotentialSpec):
    """Non-radial potential A (1 + |x|^2)^(-alpha/2) (1 + delta cos(theta))."""

    def __init__(self, amplitude: float, alpha: float, delta: float):
        """Initialize with the amplitude, decay rate and anisotropy."""
        self._amplitude = amplitude
        self._alpha = alpha
        self._delta = delta

    @property
    def source(self) -> Dict[str, Any]:
        """Configuration form."""
        return {
            'family': 'dipole',
            'amplitude': self._amplitude,
            'alpha': self._alpha,
            'delta': self._delta,
        }

    @property
    def is_radial(self) -> bool:
        """The dipole factor makes the potential non-radial."""
        return False

    def evaluate(self, r: Radii) -> Radii:
        """Radial evaluation is not defined."""
        raise UnsupportedInstanceError(
            "dipole potential is not radial; sample it on spheres")

    def sphere_values(self, r: np.ndarray, cosines: np.ndarray) -> np.ndarray:
        """Sample on spheres of the given radii."""
        radii = np.asarray(r, dtype=float)
        base = self._compute(radii)
        factor = 1.0 + self._delta * np.asarray(cosines, dtype=float)
        return np.multiply.outer(base, factor)

    def _compute(self, radii: np.ndarray) -> np.ndarray:
        """Radial envelope of the potential."""
        return self._amplitude * (1.0 + radii * radii) ** (-0.5 * self._alpha)

######################################################################

def parse_potential(source: str) -> ExpressionPotential:
    """Compile an expression into a potential."""
    return ExpressionPotential(source)

def make_potential(
        source: PotentialSource,
        dimension: int,
        gamma: float,
        a: float,
) -> PotentialSpec:
    """Create a potential from its configuration form.

    Strings and numbers are expressions in ``r``; mappings name a
    builtin family with its parameters.

    """
    if isinstance(source, bool):
        raise UnsupportedInstanceError(f"invalid potential {source!r}")
    if isinstance(source, (int, float)):
        return ExpressionPotential(repr(source))
    if isinstance(source, str):
        return ExpressionPotential(source)
    family = source.get('family')
    if family == 'manufactured':
        return ManufacturedPotential(
            dimension, gamma, a, float(source.get('q0', 0.0)))
    if family == 'dipole':
        return DipolePotential(
            float(source.get('amplitude', 1.0)),
            float(source['alpha']),
            float(source['delta']),
        )
    raise UnsupportedInstanceError(f"unknown potential family {family!r}")

def sphere_cosines(count: int = SPHERE_SAMPLES) -> np.ndarray:
    """Cosines of equally spaced polar angles from 0 to pi."""
    return np.cos(np.linspace(0.0, np.pi, count))
