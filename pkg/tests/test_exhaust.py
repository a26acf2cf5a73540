"""Tests of the exhaustion by balls, the uniqueness probe and the self test."""

import numpy as np
import pytest

from emden.errors import (
    DivergentPotentialError,
    InvalidProblemError,
    UnsupportedInstanceError,
)

from emden.solve import (
    ExhaustionConfig,
    Setup,
    cross_initialization,
    solve_entire,
    uniqueness_probe,
    verify_manufactured,
)

from conftest import (
    build_problem,
    exact_solution,
    manufactured_problem,
)

######################################################################

@pytest.fixture(scope='module')
def manufactured_solutions():
    """Entire solutions of the manufactured problems with and without gradient."""
    config = ExhaustionConfig.geometric()
    return {
        q0: solve_entire(manufactured_problem(q0), config)
        for q0 in (0.0, 1.0)
    }

@pytest.fixture(scope='module')
def algebraic_config():
    """Coarser schedule for p = (1 + r^2)^(-2)."""
    return ExhaustionConfig.geometric(h=0.02, cauchy_tol=1e-2)

######################################################################

def test_geometric_schedule():
    config = ExhaustionConfig.geometric()
    assert config.radii == (5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0, 640.0)
    assert config.window_radius == 5.0
    assert config.h == 0.01

def test_schedule_with_other_radii():
    config = ExhaustionConfig.geometric(h=0.02, tail_tol=0.1)
    other = config.with_radii([3.0, 9.0])
    assert other.radii == (3.0, 9.0)
    assert other.h == 0.02
    assert other.tail_tol == 0.1

@pytest.mark.parametrize("radii, options", [
    ([], {}),
    ([0.0, 5.0], {}),
    ([5.0, 5.0], {}),
    ([10.0, 5.0], {}),
    ([5.0], {'h': 0.0}),
    ([5.0], {'cauchy_tol': -1.0}),
    ([5.0], {'max_iter': 0}),
])
def test_invalid_schedules(radii, options):
    with pytest.raises(ValueError):
        ExhaustionConfig(radii, **options)

######################################################################

@pytest.mark.parametrize("q0", [0.0, 1.0])
def test_manufactured_solution_is_certified(manufactured_solutions, q0):
    solution = manufactured_solutions[q0]
    assert solution.certified
    assert solution.tail_value < 0.25
    assert solution.successive_gaps[-1] < 2e-3
    assert len(solution.successive_gaps) == len(solution.radii_used) - 1

@pytest.mark.parametrize("q0", [0.0, 1.0])
def test_manufactured_solution_is_accurate(manufactured_solutions, q0):
    solution = manufactured_solutions[q0]
    profile = solution.profile
    window = profile.grid.window(5.0)
    error = np.max(np.abs(profile.sample(window) - exact_solution(window)))
    assert error <= 5e-3

@pytest.mark.parametrize("q0", [0.0, 1.0])
def test_solution_lies_below_the_barrier(manufactured_solutions, q0):
    solution = manufactured_solutions[q0]
    assert np.all(solution.profile.values <= solution.barrier.v.values + 1e-10)
    assert solution.profile.grid == solution.barrier.grid

def test_gaps_shrink(manufactured_solutions):
    gaps = manufactured_solutions[0.0].successive_gaps
    assert np.all(np.diff(gaps) < 0.0)

def test_solution_report(manufactured_solutions):
    solution = manufactured_solutions[1.0]
    data = solution.as_dict()
    assert set(data) == {
        'certified', 'radii_used', 'successive_gaps', 'tail_value',
        'window_radius', 'integrability', 'barrier', 'solves',
    }
    assert data['certified'] is True
    assert data['integrability']['classification'] == 'convergent'
    assert set(data['barrier']) == {'K', 'K_nested', 'c'}
    assert len(data['solves']) == len(data['radii_used'])
    assert data['window_radius'] == 5.0

def test_algebraic_potential_is_certified(algebraic_config):
    solution = solve_entire(build_problem(), algebraic_config)
    assert solution.certified
    assert solution.radii_used[-1] <= 640.0
    assert solution.barrier.K == pytest.approx(0.5, abs=1e-6)

def test_algebraic_sandwich_at_default_settings():
    # Domain monotonicity between consecutive balls is enforced while
    # solving; a violation raises.
    solution = solve_entire(build_problem(), ExhaustionConfig.geometric())
    assert np.all(solution.profile.values <=
                  solution.barrier.v.values + 1e-10)
    assert np.all(np.asarray(solution.successive_gaps) >= 0.0)

def test_exhaustion_is_deterministic():
    config = ExhaustionConfig([5.0, 10.0], h=0.05)
    problem = build_problem("exp(-r)", "1")
    first = solve_entire(problem, config)
    second = solve_entire(problem, config)
    np.testing.assert_array_equal(first.profile.values, second.profile.values)
    np.testing.assert_array_equal(first.successive_gaps, second.successive_gaps)

def test_short_schedule_ends_uncertified(capsys):
    config = ExhaustionConfig([5.0, 10.0], h=0.05)
    solution = solve_entire(build_problem(), config)
    assert not solution.certified
    assert list(solution.radii_used) == [5.0, 10.0]
    assert "uncertified" in capsys.readouterr().err

def test_setup_can_be_shared():
    config = ExhaustionConfig([5.0, 10.0], h=0.05)
    problem = build_problem("exp(-r)")
    setup = Setup(problem, config)
    first = solve_entire(problem, config, setup)
    second = solve_entire(problem, config)
    np.testing.assert_array_equal(first.profile.values, second.profile.values)

def test_divergent_potential_is_refused():
    config = ExhaustionConfig([5.0], h=0.05)
    with pytest.raises(DivergentPotentialError):
        solve_entire(build_problem("(1+r)^(-2)"), config)

def test_invalid_problem_is_refused():
    config = ExhaustionConfig([5.0], h=0.05)
    with pytest.raises(InvalidProblemError) as info:
        solve_entire(build_problem(gamma=0.0), config)
    assert info.value.report.violations

######################################################################

def test_uniqueness_probe_passes(algebraic_config):
    report = uniqueness_probe(build_problem(), algebraic_config)
    assert report.applicable
    assert report.passed
    assert report.difference < 1e-8
    assert len(report.reports) == 2
    assert report.as_dict()['passed'] is True

def test_manufactured_starts_agree_at_the_default_tolerance():
    config = ExhaustionConfig.geometric()
    assert config.newton_tol == 1e-9
    report = uniqueness_probe(manufactured_problem(0.0), config)
    assert report.applicable
    assert report.passed
    assert report.difference <= 10.0 * config.newton_tol

def test_probe_is_skipped_for_uncertified_runs():
    config = ExhaustionConfig([5.0, 10.0], h=0.05, tail_tol=1e-6)
    report = uniqueness_probe(build_problem(), config)
    assert not report.applicable
    assert not report.passed
    assert report.radius == 10.0
    assert report.as_dict()['difference'] is None
    assert str(report) == "not applicable"

def test_identical_starts_agree_exactly():
    config = ExhaustionConfig([10.0], h=0.05)
    problem = build_problem("exp(-r)", "1")
    setup = Setup(problem, config)
    solution = solve_entire(problem, config, setup)
    bp = solution.ball_problem
    report = cross_initialization(bp, bp.bracket_high, bp.bracket_high)
    assert report.difference == 0.0
    assert report.passed

######################################################################

def test_self_test_is_second_order():
    study = verify_manufactured(manufactured_problem(0.0),
                                ExhaustionConfig.geometric())
    assert study.spacings == [0.02, 0.01]
    assert study.errors[1] < study.errors[0]
    assert study.order >= 1.7
    data = study.as_dict()
    assert set(data) == {'radius', 'spacings', 'errors', 'order', 'solves'}
    assert data['radius'] == 20.0

def test_self_test_with_gradient():
    study = verify_manufactured(manufactured_problem(1.0),
                                ExhaustionConfig.geometric(h=0.02))
    assert study.order >= 1.7

def test_self_test_needs_the_manufactured_source():
    with pytest.raises(UnsupportedInstanceError):
        verify_manufactured(build_problem(), ExhaustionConfig.geometric())

def test_self_test_needs_the_matching_gradient_coefficient():
    mismatched = build_problem({'family': 'manufactured', 'q0': 1.0}, "2")
    with pytest.raises(UnsupportedInstanceError):
        verify_manufactured(mismatched, ExhaustionConfig.geometric())
