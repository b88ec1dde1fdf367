import math

import numpy as np
import pytest
from scipy import special

from randflight.mathkit import (
    J0_SWITCH,
    bessel_j0,
    hoeffding_bound,
    j0_envelope,
    j0_quadrature,
    j0_series,
    poisson_tail_bound,
    ray_hit_probability,
    sphere_projection_law,
    verify_j0_bound,
)

FIRST_ZERO = 2.404825557695773


def test_j0_at_zero():
    assert bessel_j0(0.0) == 1.0


def test_first_zero():
    assert abs(bessel_j0(FIRST_ZERO)) <= 1e-15


def test_even_function():
    x = np.linspace(0, 40, 101)
    np.testing.assert_array_equal(bessel_j0(-x), bessel_j0(x))


def test_agrees_with_scipy():
    x = np.concatenate((np.linspace(0, 30, 3001), np.linspace(30, 2000, 2000)))
    np.testing.assert_allclose(bessel_j0(x), special.j0(x), rtol=0, atol=1e-12)


def test_agrees_with_quadrature():
    x = np.random.default_rng(3).uniform(0, 200, 25)
    np.testing.assert_allclose(bessel_j0(x), j0_quadrature(x), rtol=0, atol=1e-10)


def test_series_still_good_at_fifty():
    assert abs(j0_series(np.array([50.0]))[0] - j0_quadrature(50.0)) <= 1e-10


def test_branches_meet_at_switch():
    x = np.array([J0_SWITCH - 1e-9, J0_SWITCH + 1e-9])
    np.testing.assert_allclose(bessel_j0(x), special.j0(x), atol=1e-12)


def test_scalar_and_array_shapes():
    assert isinstance(bessel_j0(1.0), float)
    assert bessel_j0(np.ones((2, 3))).shape == (2, 3)
    with pytest.raises(ValueError):
        bessel_j0(float("nan"))


def test_envelope():
    assert j0_envelope(0.0) == 1.0
    assert j0_envelope(math.sqrt(15.0)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        j0_envelope(-1.0)


def test_bound_holds_to_one_hundred():
    rep = verify_j0_bound(100.0, 1e-3)
    assert rep.holds
    assert rep.max_violation <= 0.0


def test_bound_is_tight_at_zero():
    rep = verify_j0_bound(0.01, 1e-3)
    assert rep.max_violation == 0.0
    assert rep.worst_x == 0.0


def test_bound_around_split_point():
    assert verify_j0_bound(1.2, 1e-4).holds


def test_bound_argument_checks():
    with pytest.raises(ValueError):
        verify_j0_bound(10.0, 0.1)
    with pytest.raises(ValueError):
        verify_j0_bound(1e5, 1e-3)


def test_poisson_tail_bound():
    assert poisson_tail_bound(9.0, 6.0) == pytest.approx(2 * math.exp(-1.2))
    assert poisson_tail_bound(9.0, 6.0) == pytest.approx(0.602388, abs=1e-6)
    assert poisson_tail_bound(9.0, 1e-9) == pytest.approx(2.0)


def test_poisson_tail_bound_dominates_mc():
    rng = np.random.default_rng(21)
    draws = rng.poisson(9.0, 100_000)
    freq = np.mean(np.abs(draws - 9.0) >= 6.0)
    assert freq <= poisson_tail_bound(9.0, 6.0)


def test_hoeffding():
    assert hoeffding_bound(1000, 0.05) == pytest.approx(2 * math.exp(-5.0))
    assert hoeffding_bound(10, 1e-9) == pytest.approx(2.0)
    rng = np.random.default_rng(22)
    means = rng.binomial(1000, 0.5, 20_000) / 1000
    freq = np.mean(np.abs(means - 0.5) >= 0.05)
    assert freq <= hoeffding_bound(1000, 0.05) + 4 * math.sqrt(freq * (1 - freq) / 20_000 + 1e-12)


def test_projection_law_examples():
    assert sphere_projection_law(3, 0.6) == pytest.approx(0.8)
    assert sphere_projection_law(4, 0.5) == pytest.approx(0.75)
    assert sphere_projection_law(2, 0.9) == 1.0
    for gamma in (0.0, 1.0):
        with pytest.raises(ValueError):
            sphere_projection_law(3, gamma)


def test_ray_hit_probability():
    assert ray_hit_probability(2.0) == pytest.approx(1 / 6)
    assert abs(ray_hit_probability(1e3) - 1 / (math.pi * 1e3)) <= 1e-6
    assert ray_hit_probability(2.0) <= 1 / 4
    with pytest.raises(ValueError):
        ray_hit_probability(1.0)
