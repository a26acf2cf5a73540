"""Radial grids, difference operators and the first eigenpair."""

from .grid import (
    RadialGrid,
    RadialProfile,
    apply_bands,
    central_gradient,
    discrete_laplacian,
    interpolate_onto,
    laplacian_bands,
    sample_profile,
)

from .eigen import (
    EigenPair,
    choose_epsilon,
    first_eigenpair,
)
