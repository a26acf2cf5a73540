"""Uniform radial grids and finite difference operators on them."""

from typing import (
    Iterator,
    Optional,
    Tuple,
)

import numpy as np

from ..util import (
    class_str,
    grid_str,
)

######################################################################

# Smallest number of interior nodes of a grid.
MIN_INTERIOR = 16

class RadialGrid:
    """Uniform grid on [0, R] with M interior nodes.

    The nodes are r_i = i h for i = 0..M+1, with h = R/(M+1).  Node 0
    is the origin and node M+1 is the boundary sphere.

    """

    def __init__(self, radius: float, interior: int):
        """Initialize given the radius and the number of interior nodes."""
        if not radius > 0:
            raise ValueError(f"grid radius must be positive, got {radius}")
        if interior < MIN_INTERIOR:
            raise ValueError(
                f"grid needs at least {MIN_INTERIOR} interior nodes, "
                f"got {interior}")
        self._radius = float(radius)
        self._interior = interior
        self._spacing = self._radius / (interior + 1)
        nodes = self._spacing * np.arange(interior + 2, dtype=float)
        nodes[-1] = self._radius
        nodes.flags.writeable = False
        self._nodes = nodes

    @classmethod
    def with_spacing(cls, radius: float, spacing: float) -> 'RadialGrid':
        """Create the grid on [0, R] whose spacing is closest to h."""
        interior = int(round(radius / spacing)) - 1
        return cls(radius, interior)

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, grid_str(self._radius, self._interior))

    def __eq__(self, other: object) -> bool:
        """Grids are equal when they have the same radius and nodes."""
        if not isinstance(other, RadialGrid):
            return False
        return (
            self._radius == other._radius and
            self._interior == other._interior
        )

    def __hash__(self) -> int:
        """Make the grid hashable."""
        return hash((self._radius, self._interior))

    def __len__(self) -> int:
        """Number of nodes, including the origin and the boundary."""
        return self._interior + 2

    @property
    def radius(self) -> float:
        """Radius R of the ball."""
        return self._radius

    @property
    def interior(self) -> int:
        """Number M of interior nodes."""
        return self._interior

    @property
    def spacing(self) -> float:
        """Grid spacing h."""
        return self._spacing

    @property
    def nodes(self) -> np.ndarray:
        """Read-only array of all the nodes."""
        return self._nodes

    def window(self, radius: float) -> np.ndarray:
        """Nodes in [0, radius]."""
        nodes = self._nodes
        return nodes[nodes <= radius * (1.0 + 1e-12)]

######################################################################

class RadialProfile:
    """Nodal values of a radial function on a grid."""

    def __init__(
            self,
            grid: RadialGrid,
            values: np.ndarray,
            boundary_defined: bool = True,
    ):
        """Initialize with the grid and the values at all of its nodes.

        The flag tells whether the value at the boundary node carries
        information or is a placeholder.

        """
        values = np.array(values, dtype=float)
        if values.shape != (len(grid),):
            raise ValueError(
                f"profile needs {len(grid)} values, got shape {values.shape}")
        self._grid = grid
        self._values = values
        self._boundary_defined = boundary_defined

    def __repr__(self) -> str:
        """Represent as string."""
        return class_str(self, repr(self._grid))

    def __iter__(self) -> Iterator[Tuple[float, float]]:
        """Iterate over the (radius, value) pairs."""
        yield from zip(self._grid.nodes.tolist(), self._values.tolist())

    @property
    def grid(self) -> RadialGrid:
        """Grid the profile is sampled on."""
        return self._grid

    @property
    def values(self) -> np.ndarray:
        """Nodal values (the array is shared, not copied)."""
        return self._values

    @property
    def boundary_defined(self) -> bool:
        """False if the boundary value is only a placeholder."""
        return self._boundary_defined

    @property
    def interior_values(self) -> np.ndarray:
        """Values at the interior nodes 1..M."""
        return self._values[1:-1]

    def copy(self) -> 'RadialProfile':
        """Return an independent copy."""
        return RadialProfile(self._grid, self._values.copy(),
                             self._boundary_defined)

    def with_values(self, values: np.ndarray) -> 'RadialProfile':
        """Return a profile on the same grid with other values."""
        return RadialProfile(self._grid, values)

    def scaled(self, factor: float) -> 'RadialProfile':
        """Return the profile multiplied by a constant."""
        return RadialProfile(self._grid, factor * self._values,
                             self._boundary_defined)

    def sample(self, radii: np.ndarray) -> np.ndarray:
        """Interpolate linearly at the given radii."""
        return np.interp(radii, self._grid.nodes, self._values)

    def restricted(self, grid: RadialGrid) -> 'RadialProfile':
        """Interpolate linearly onto another grid inside this one."""
        return RadialProfile(grid, self.sample(grid.nodes))

def sample_profile(grid: RadialGrid, function: object) -> RadialProfile:
    """Sample a vectorized callable at the nodes of the grid."""
    values = np.asarray(function(grid.nodes), dtype=float)  # type: ignore
    values = np.broadcast_to(values, grid.nodes.shape)
    return RadialProfile(grid, values)

######################################################################

def discrete_laplacian(profile: RadialProfile, dimension: int) -> RadialProfile:
    """Apply the radial Laplacian u'' + (N-1)/r u' by central differences.

    The origin uses the symmetry closure 2N (u_1 - u_0)/h^2, valid for
    functions with u'(0) = 0.  The value at the boundary node is not
    defined: it is set to zero and flagged.

    """
    grid = profile.grid
    u = profile.values
    h = grid.spacing
    r = grid.nodes
    result = np.zeros_like(u)
    second = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h)
    first = (u[2:] - u[:-2]) / (2.0 * h)
    result[1:-1] = second + (dimension - 1) / r[1:-1] * first
    result[0] = 2.0 * dimension * (u[1] - u[0]) / (h * h)
    return RadialProfile(grid, result, boundary_defined=False)

def central_gradient(profile: RadialProfile) -> np.ndarray:
    """Central difference approximation of u' at the interior nodes."""
    u = profile.values
    h = profile.grid.spacing
    return (u[2:] - u[:-2]) / (2.0 * h)

def laplacian_bands(grid: RadialGrid, dimension: int) -> np.ndarray:
    """Banded form of the matrix of -Laplacian on the nodes 0..M.

    The boundary node carries the Dirichlet value zero and is left
    out.  The result has the layout expected by scipy's solve_banded
    with one band above and one below the diagonal.

    """
    h = grid.spacing
    size = grid.interior + 1
    r = grid.nodes[1:size]
    bands = np.zeros((3, size))
    inv_h2 = 1.0 / (h * h)
    drift = (dimension - 1) / (2.0 * h * r)
    # Diagonal.
    bands[1, :] = 2.0 * inv_h2
    bands[1, 0] = 2.0 * dimension * inv_h2
    # Above the diagonal: coefficient of u_{i+1} in row i.
    bands[0, 1] = -2.0 * dimension * inv_h2
    bands[0, 2:] = -inv_h2 - drift[:-1]
    # Below the diagonal: coefficient of u_{i-1} in row i.
    bands[2, :-1] = -inv_h2 + drift
    return bands

def apply_bands(bands: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Multiply a tridiagonal matrix in banded form with a vector."""
    result = bands[1] * x
    result[:-1] += bands[0, 1:] * x[1:]
    result[1:] += bands[2, :-1] * x[:-1]
    return result

def interpolate_onto(
        profile: RadialProfile,
        radii: np.ndarray,
        boundary: Optional[float] = None,
) -> np.ndarray:
    """Interpolate linearly at the given radii.

    Radii beyond the grid take the boundary value if one is given.

    """
    values = profile.sample(radii)
    if boundary is not None:
        values = np.where(radii > profile.grid.radius, boundary, values)
    return values
