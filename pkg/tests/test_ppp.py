import numpy as np
import pytest
from scipy import stats

from randflight.ppp import (
    ByCount,
    ByTime,
    iter_inversion,
    sample_by_inversion,
    sample_by_thinning,
)
from randflight.rates import RateFunction


def test_by_count_gives_exactly_n(power_half, rng):
    s = sample_by_inversion(power_half, ByCount(100), rng)
    assert len(s) == 100
    assert np.all(np.diff(s.times) > 0)
    assert s.times[0] > 0


def test_by_time_stays_below_horizon(power_half, rng):
    s = sample_by_inversion(power_half, ByTime(100.0), rng)
    assert np.all(s.times <= 100.0)
    assert s.count(100.0) == len(s)


def test_overshoot_keeps_one_point_past_horizon(power_half):
    a = sample_by_inversion(power_half, ByTime(100.0), 7)
    b = sample_by_inversion(power_half, ByTime(100.0), 7, overshoot=True)
    assert len(b) == len(a) + 1
    np.testing.assert_array_equal(b.times[:-1], a.times)
    assert b.times[-1] > 100.0


def test_same_seed_same_points(log_two):
    a = sample_by_inversion(log_two, ByCount(500), 42).times
    b = sample_by_inversion(log_two, ByCount(500), 42).times
    np.testing.assert_array_equal(a, b)


def test_constant_rate_by_count():
    # unit rate: the points are plain cumulative sums of exponentials
    rf = RateFunction.constant(1.0)
    s = sample_by_inversion(rf, ByCount(10), np.random.default_rng(3))
    ref = np.cumsum(np.random.default_rng(3).standard_exponential(10))
    np.testing.assert_allclose(s.times, ref, rtol=1e-15)


def test_stream_matches_materialized(power_half):
    stream = iter_inversion(power_half, np.random.default_rng(9), chunk=64)
    streamed = np.concatenate([next(stream) for _ in range(4)])
    whole = sample_by_inversion(power_half, ByCount(256), np.random.default_rng(9)).times
    np.testing.assert_allclose(streamed, whole, rtol=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("inf"), float("nan")])
def test_bad_horizon(bad):
    with pytest.raises(ValueError):
        ByTime(bad)


@pytest.mark.parametrize("bad", [0, -3, 10**9, 2.5])
def test_bad_count(bad):
    with pytest.raises(ValueError):
        ByCount(bad)


def test_thinning_requires_a_majorant(power_half, rng):
    with pytest.raises(ValueError):
        sample_by_thinning(power_half, (1.0, 4.0), 0.1, rng)


def test_thinning_window_inside_support(log_two, rng):
    with pytest.raises(ValueError):
        sample_by_thinning(log_two, (1.0, 10.0), 1.0, rng)


def test_thinning_points_inside_window(power_half, rng):
    s = sample_by_thinning(power_half, (1.0, 9.0), 1.0, rng)
    assert np.all((s.times >= 1.0) & (s.times <= 9.0))


def test_count_is_poisson_with_mean_lambda(power_half):
    # Lambda(16) = 8 for alpha = 1/2
    rng = np.random.default_rng(11)
    counts = np.array([len(sample_by_inversion(power_half, ByTime(16.0), rng)) for _ in range(4000)])
    assert abs(counts.mean() - 8.0) <= 4 * np.sqrt(8.0 / 4000)
    assert abs(counts.var() - 8.0) <= 1.0


def test_inversion_and_thinning_agree_on_window(power_half):
    rng = np.random.default_rng(12)
    inv = np.concatenate([sample_by_inversion(power_half, ByTime(9.0), rng).times for _ in range(800)])
    inv = inv[inv >= 1.0]
    thin = np.concatenate([sample_by_thinning(power_half, (1.0, 9.0), 1.0, rng).times for _ in range(800)])
    assert stats.ks_2samp(inv, thin).pvalue > 1e-3
