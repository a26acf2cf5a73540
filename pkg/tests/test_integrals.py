"""Tests of the integrability check and the barrier constant."""

import numpy as np
import pytest

from emden.barrier import (
    Classification,
    check_integrability,
    compute_K,
    decay_profile,
    nested_decay_integral,
)

from emden.barrier.integrals import (
    doubling_integral,
    segment_integral,
    tail_moment,
)

from emden.errors import DivergentPotentialError

######################################################################

def algebraic(r):
    return (1.0 + r * r) ** -2.0

def exponential(r):
    return np.exp(-r)

def cubic(r):
    return (1.0 + r) ** -3.0

def quadratic(r):
    return (1.0 + r) ** -2.0

TEST_FAMILY = [algebraic, exponential, cubic]

def test_segment_integral_of_a_polynomial():
    value = segment_integral(lambda r: r ** 3, 0.0, 2.0)
    assert value == pytest.approx(4.0, rel=1e-14)

@pytest.mark.parametrize("phi, expected", [
    (cubic, 0.5),
    (exponential, 1.0),
    (algebraic, 0.5),
])
def test_convergent_moments(phi, expected):
    verdict = check_integrability(phi)
    assert verdict.classification is Classification.CONVERGENT
    assert verdict.is_convergent
    assert abs(verdict.value_estimate - expected) < 1e-6
    assert verdict.error_estimate < 1e-8

def test_logarithmic_divergence():
    verdict = check_integrability(quadratic)
    assert verdict.classification is Classification.DIVERGENT
    partials = verdict.partials
    # The partial integrals grow by about log 2 per doubling.
    assert partials[-1] - partials[-2] == pytest.approx(np.log(2.0), abs=0.1)

def test_linear_growth_diverges():
    verdict = check_integrability(lambda r: np.ones_like(r))
    assert verdict.classification is Classification.DIVERGENT

def test_indeterminate_when_the_doublings_run_out():
    verdict = doubling_integral(lambda r: r * (1.0 + r) ** -2.0, 1e-8,
                                doublings=3)
    assert verdict.classification is Classification.INDETERMINATE
    assert verdict.tail_bound_used == 8.0

def test_tail_moment():
    # Integral of r exp(-r) over [R, inf) is (R + 1) exp(-R).
    assert tail_moment(exponential, 5.0) == pytest.approx(6.0 * np.exp(-5.0),
                                                          rel=1e-8)

def test_tail_moment_of_a_divergent_majorant():
    with pytest.raises(DivergentPotentialError):
        tail_moment(quadratic, 10.0)

######################################################################

def test_K_in_three_dimensions():
    nested, reduced = compute_K(algebraic, 3)
    assert reduced == pytest.approx(0.5, abs=1e-6)
    assert nested == pytest.approx(0.5, abs=1e-6)

def test_K_in_four_dimensions():
    _, reduced = compute_K(algebraic, 4)
    assert reduced == pytest.approx(0.25, abs=1e-6)

@pytest.mark.parametrize("phi", TEST_FAMILY)
@pytest.mark.parametrize("dimension", [3, 4, 5])
def test_K_identity(phi, dimension):
    nested, reduced = compute_K(phi, dimension)
    assert abs(nested - reduced) <= 1e-6 * reduced

def test_nested_integral_alone():
    assert nested_decay_integral(exponential, 3) == pytest.approx(1.0, rel=1e-7)

def test_K_needs_three_dimensions():
    with pytest.raises(ValueError):
        compute_K(algebraic, 2)

def test_K_of_a_divergent_majorant():
    with pytest.raises(DivergentPotentialError) as info:
        compute_K(quadratic, 3)
    assert info.value.verdict.classification is Classification.DIVERGENT

######################################################################

def test_decay_profile_starts_at_K():
    nodes = np.linspace(0.0, 40.0, 4001)
    sums = decay_profile(algebraic, 3, nodes)
    assert sums[0] == pytest.approx(0.5, rel=1e-7)
    assert np.all(np.diff(sums) <= 0.0)
    assert sums[-1] > 0.0

def test_decay_profile_far_field():
    # For large r the profile behaves like pi/(4 r) - 1/(2 r^2).
    nodes = np.linspace(0.0, 200.0, 2001)
    sums = decay_profile(algebraic, 3, nodes)
    assert sums[-1] * 200.0 == pytest.approx(np.pi / 4.0 - 1.0 / 400.0, rel=1e-5)

def test_decay_profile_of_the_exponential():
    # In three dimensions the profile of exp(-r) is
    # (2 - (r + 2) exp(-r)) / r, with the value 1 at r = 0.
    nodes = np.linspace(0.0, 30.0, 301)
    sums = decay_profile(exponential, 3, nodes)
    r = nodes[1:]
    expected = (2.0 - (r + 2.0) * np.exp(-r)) / r
    assert sums[0] == pytest.approx(1.0, rel=1e-9)
    np.testing.assert_allclose(sums[1:], expected, rtol=1e-8)
