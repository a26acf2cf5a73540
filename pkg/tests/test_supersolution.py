"""Tests of the barrier and of its supersolution property."""

import numpy as np
import pytest

from emden.barrier import (
    BarrierData,
    barrier_height,
    compute_barrier,
    restrict_barrier,
    truncation_slack,
    verify_supersolution,
)

from emden.define import majorant

from emden.discretize import (
    RadialGrid,
    RadialProfile,
    discrete_laplacian,
)

from emden.errors import (
    BarrierInvariantError,
    SupersolutionViolationError,
)

from conftest import build_problem

######################################################################

POTENTIALS = ["(1+r^2)^(-2)", "exp(-r)", "(1+r)^(-3)"]

def make_barrier(p="(1+r^2)^(-2)", gamma=1.0, radius=40.0, h=0.01):
    """Barrier of a radial problem with its majorant and grid."""
    phi = majorant(build_problem(p, gamma=gamma))
    grid = RadialGrid.with_spacing(radius, h)
    return compute_barrier(phi, 3, gamma, grid), phi, grid

def test_barrier_height_examples():
    assert barrier_height(0.5, 1.0) == pytest.approx(1.2247449, abs=1e-7)
    assert barrier_height(0.5, 2.0) == pytest.approx(1.2599210, abs=1e-7)

def test_barrier_invariants():
    barrier, _, _ = make_barrier()
    c = barrier.c
    w = barrier.w.values
    v = barrier.v.values
    assert barrier.K == pytest.approx(0.5, abs=1e-6)
    assert w[0] == barrier.K
    assert abs(v[0] - c) <= 4 * np.spacing(c)
    assert v.max() - c <= 4 * np.spacing(c)
    assert np.all(np.diff(w) <= np.spacing(w[:-1]))
    assert np.all(np.diff(v) <= np.spacing(v[:-1]))
    assert np.all(w > 0.0)

def test_barrier_decays_like_the_far_field():
    barrier, _, _ = make_barrier(radius=40.0)
    # w(R) is close to pi/(4R) - 1/(2R^2) for this majorant.
    assert barrier.w.values[-1] == pytest.approx(np.pi / 160.0 - 1.0 / 3200.0,
                                                 rel=1e-4)
    expected = barrier.c * (barrier.w.values[-1] / barrier.K) ** (1.0 / 3.0)
    assert barrier.v.values[-1] == pytest.approx(expected, rel=1e-12)

def test_barrier_rejects_increasing_samples():
    barrier, _, grid = make_barrier(radius=5.0, h=0.05)
    v = barrier.v.values.copy()
    v[10] = v[9] * 1.001
    broken = BarrierData(barrier.K, barrier.c, barrier.w,
                         barrier.v.with_values(v), 1.0, 3)
    with pytest.raises(BarrierInvariantError):
        broken.check_invariants()

@pytest.mark.parametrize("p", POTENTIALS)
@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_discrete_supersolution(p, gamma):
    barrier, phi, grid = make_barrier(p, gamma)
    report = verify_supersolution(barrier, phi, grid)
    assert report.passed
    assert len(report.slack) == grid.interior
    assert np.all(report.margins[1:] < report.slack)
    assert np.all(report.excess < 0.0)
    assert report.worst_node >= 1
    r = grid.nodes[:-1]
    assert np.all(report.margins[r >= 1.0] < 0.0)

@pytest.mark.parametrize("p", ["exp(-r)", "(1+r)^(-3)"])
def test_first_order_error_near_the_origin_is_covered(p):
    # v has an r^3 term when Phi'(0) is not zero, which the stencil
    # resolves only to O(h) next to the origin.
    barrier, phi, grid = make_barrier(p, 1.0)
    report = verify_supersolution(barrier, phi, grid)
    assert np.any(report.margins[1:6] > 0.0)
    assert np.all(report.margins[1:6] < report.slack[:5])
    assert report.passed

def test_slack_bounds_the_error_on_a_cubic():
    grid = RadialGrid.with_spacing(2.0, 0.05)
    r = grid.nodes
    slack = truncation_slack(RadialProfile(grid, r ** 3), 3, factor=2.0)
    interior = r[1:-1]
    # The stencil error on r^3 is (N-1) h^2 / r.
    error = 2.0 * 0.05 ** 2 / interior
    assert np.all(slack >= 1.5 * error)

def test_slack_vanishes_on_a_quadratic():
    grid = RadialGrid.with_spacing(2.0, 0.05)
    slack = truncation_slack(RadialProfile(grid, 1.0 - grid.nodes ** 2), 3)
    np.testing.assert_allclose(slack, 0.0, atol=1e-9)

def test_shrunk_barrier_is_not_a_supersolution():
    barrier, phi, grid = make_barrier(radius=10.0)
    report = verify_supersolution(barrier, phi, grid, v=barrier.v.scaled(0.1))
    assert not report.passed
    assert report.margins[0] > 0.0
    with pytest.raises(SupersolutionViolationError) as info:
        verify_supersolution(barrier, phi, grid, v=barrier.v.scaled(0.1),
                             strict=True)
    assert not info.value.report.passed

def test_margin_without_source_is_the_laplacian():
    barrier, _, grid = make_barrier(radius=10.0)
    report = verify_supersolution(barrier, np.zeros_like, grid)
    laplacian = discrete_laplacian(barrier.v, 3).values[:-1]
    np.testing.assert_array_equal(report.margins, laplacian)
    r = grid.nodes[:-1]
    assert np.all(report.margins[r >= 1.0] < 0.0)

def test_margin_profile_is_undefined_on_the_sphere():
    barrier, phi, grid = make_barrier(radius=10.0)
    profile = verify_supersolution(barrier, phi, grid).margin_profile()
    assert not profile.boundary_defined
    assert profile.values[-1] == 0.0
    assert len(profile.values) == len(grid)

def test_restricted_barrier():
    barrier, phi, grid = make_barrier(radius=20.0)
    small = RadialGrid.with_spacing(10.0, 0.01)
    restricted = restrict_barrier(barrier, small)
    assert restricted.grid == small
    np.testing.assert_allclose(restricted.v.values,
                               barrier.v.values[:len(small)], rtol=1e-12)
    assert verify_supersolution(restricted, phi, small).passed

def test_barrier_with_precomputed_constants():
    phi = majorant(build_problem())
    grid = RadialGrid.with_spacing(10.0, 0.02)
    fresh = compute_barrier(phi, 3, 1.0, grid)
    again = compute_barrier(phi, 3, 1.0, grid,
                            constants=(fresh.K_nested, fresh.K))
    np.testing.assert_array_equal(fresh.v.values, again.v.values)
