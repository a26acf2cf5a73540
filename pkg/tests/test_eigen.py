"""Tests of the first eigenpair and of the subsolution scale."""

import numpy as np
import pytest

from emden.discretize import (
    RadialGrid,
    choose_epsilon,
    first_eigenpair,
)

from emden.discretize.grid import central_gradient

from emden.errors import (
    EigenNonconvergenceError,
    SubsolutionViolationError,
)

from conftest import build_problem

######################################################################

def discrete_eigenvalue(grid):
    # Exact eigenvalue of the three dimensional scheme.
    h = grid.spacing
    return 4.0 / (h * h) * np.sin(0.5 * np.pi * h / grid.radius) ** 2

def test_unit_eigenvalue_on_the_ball_of_radius_pi():
    pair = first_eigenpair(RadialGrid(np.pi, 999), 3)
    assert abs(pair.lambda1 - 1.0) <= 1e-5

def test_eigenvalue_on_the_unit_ball():
    pair = first_eigenpair(RadialGrid(1.0, 999), 3)
    assert pair.lambda1 == pytest.approx(np.pi ** 2, abs=1e-3)

@pytest.mark.parametrize("radius, interior", [
    (1.0, 99),
    (5.0, 499),
    (np.pi, 999),
])
def test_eigenvalue_matches_the_discrete_formula(radius, interior):
    grid = RadialGrid(radius, interior)
    pair = first_eigenpair(grid, 3)
    assert pair.lambda1 == pytest.approx(discrete_eigenvalue(grid), rel=1e-9)

def test_eigenvalue_converges_at_second_order():
    coarse = first_eigenpair(RadialGrid(1.0, 99), 3).lambda1
    fine = first_eigenpair(RadialGrid(1.0, 199), 3).lambda1
    ratio = abs(coarse - np.pi ** 2) / abs(fine - np.pi ** 2)
    assert ratio >= 3.5

@pytest.mark.parametrize("dimension", [3, 4, 6])
def test_eigenvalue_scales_with_the_radius(dimension):
    small = first_eigenpair(RadialGrid(2.0, 199), dimension).lambda1
    large = first_eigenpair(RadialGrid(4.0, 199), dimension).lambda1
    assert large == pytest.approx(small / 4.0, rel=1e-9)

@pytest.mark.parametrize("dimension", [3, 5])
def test_eigenfunction_is_positive_and_normalized(dimension):
    grid = RadialGrid(3.0, 299)
    pair = first_eigenpair(grid, dimension)
    phi = pair.phi1.values
    assert pair.grid == grid
    assert np.all(phi[:-1] > 0.0)
    assert phi[:-1].max() == 1.0
    assert phi[-1] == 0.0
    assert np.all(np.diff(phi) <= 1e-12)
    assert pair.iterations >= 2

def test_eigen_iteration_cap():
    with pytest.raises(EigenNonconvergenceError):
        first_eigenpair(RadialGrid(1.0, 99), 3, max_iter=1)

######################################################################

def subsolution_holds(problem, pair, epsilon):
    grid = pair.grid
    r = grid.nodes[1:-1]
    phi = pair.phi1.interior_values
    slope = np.abs(central_gradient(pair.phi1)) ** problem.a
    lhs = (epsilon * pair.lambda1 * phi +
           problem.q_spec.evaluate(r) * epsilon ** problem.a * slope)
    rhs = problem.p_spec.evaluate(r) * (epsilon * phi) ** -problem.gamma
    return bool(np.all(lhs <= rhs))

def test_unit_scale_is_kept_when_it_works():
    grid = RadialGrid(np.pi, 299)
    pair = first_eigenpair(grid, 3)
    problem = build_problem("1", "0", gamma=1.0)
    epsilon = choose_epsilon(problem, pair, grid)
    assert epsilon >= 0.9
    assert subsolution_holds(problem, pair, epsilon)

def test_scale_of_a_weak_potential():
    grid = RadialGrid(np.pi, 299)
    pair = first_eigenpair(grid, 3)
    problem = build_problem("1e-4", "0", gamma=1.0)
    epsilon = choose_epsilon(problem, pair, grid)
    # The inequality reduces to eps^2 lambda1 phi1^2 <= 1e-4.
    phi_max = pair.phi1.interior_values.max()
    expected = 0.01 / (np.sqrt(pair.lambda1) * phi_max)
    assert epsilon == pytest.approx(expected, rel=1e-9)
    assert subsolution_holds(problem, pair, epsilon)
    assert not subsolution_holds(problem, pair, 1.001 * epsilon)

def test_stronger_potential_allows_a_larger_scale():
    grid = RadialGrid(6.0, 299)
    pair = first_eigenpair(grid, 3)
    weak = choose_epsilon(build_problem("1e-3*exp(-r)", "1"), pair, grid)
    strong = choose_epsilon(build_problem("10*exp(-r)", "1"), pair, grid)
    assert strong >= weak
    assert subsolution_holds(build_problem("1e-3*exp(-r)", "1"), pair, weak)

def test_gradient_term_lowers_the_scale():
    grid = RadialGrid(6.0, 299)
    pair = first_eigenpair(grid, 3)
    without = choose_epsilon(build_problem("1e-3*exp(-r)", "0"), pair, grid)
    with_gradient = choose_epsilon(build_problem("1e-3*exp(-r)", "100"),
                                   pair, grid)
    assert with_gradient <= without

def test_scale_needs_the_eigenpair_grid():
    pair = first_eigenpair(RadialGrid(1.0, 99), 3)
    with pytest.raises(ValueError):
        choose_epsilon(build_problem(), pair, RadialGrid(1.0, 199))

def test_inconsistent_subsolution_check_is_an_error(monkeypatch):
    grid = RadialGrid(np.pi, 299)
    pair = first_eigenpair(grid, 3)
    answers = iter([True, False])
    monkeypatch.setattr("emden.discretize.eigen._SubsolutionTest.holds",
                        lambda self, epsilon: next(answers))
    with pytest.raises(SubsolutionViolationError):
        choose_epsilon(build_problem("1", "0"), pair, grid)
