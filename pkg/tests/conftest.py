"""Shared fixtures of the test suite."""

from typing import (
    Callable,
    Optional,
)

import numpy as np
import pytest

from emden.define import (
    ExpressionPotential,
    ManufacturedPotential,
    Problem,
    make_potential,
)

from emden.define.potentials import PotentialSource

from emden.solve import ExhaustionConfig

######################################################################

def build_problem(
        p: PotentialSource = "(1+r^2)^(-2)",
        q: PotentialSource = "0",
        N: int = 3,
        gamma: float = 1.0,
        a: float = 2.0,
        phi: Optional[PotentialSource] = None,
        p_radial: Optional[bool] = None,
) -> Problem:
    """Problem instance out of configuration-style potentials."""
    p_spec = make_potential(p, N, gamma, a)
    q_spec = make_potential(q, N, gamma, a)
    phi_spec = None if phi is None else make_potential(phi, N, gamma, a)
    return Problem(N, gamma, a, p_spec, q_spec, phi_spec, p_radial)

def manufactured_problem(q0: float = 0.0, gamma: float = 1.0, a: float = 2.0) -> Problem:
    """Problem whose entire solution is (1 + r^2)^(-1/2)."""
    p_spec = ManufacturedPotential(3, gamma, a, q0)
    q_spec = ExpressionPotential(repr(q0))
    return Problem(3, gamma, a, p_spec, q_spec)

def exact_solution(r: np.ndarray) -> np.ndarray:
    """The manufactured solution."""
    return np.asarray(ManufacturedPotential.exact_solution(r))

@pytest.fixture
def problem_factory() -> Callable[..., Problem]:
    """Build problems from potential sources."""
    return build_problem

@pytest.fixture
def algebraic_problem() -> Problem:
    """p = (1 + r^2)^(-2), q = 0, N = 3, gamma = 1."""
    return build_problem()

@pytest.fixture
def manufactured() -> Problem:
    """Manufactured problem without gradient term."""
    return manufactured_problem(0.0)

@pytest.fixture
def manufactured_gradient() -> Problem:
    """Manufactured problem with q = 1 and a = 2."""
    return manufactured_problem(1.0)

@pytest.fixture
def default_schedule() -> ExhaustionConfig:
    """Radii 5, 10, ..., 640 with the default tolerances."""
    return ExhaustionConfig.geometric()
