import numpy as np
import pytest

from randflight.analysis import (
    binomial_se,
    concentration_function,
    detect_hits,
    envelope_violation_rate,
    gap_statistics,
    loglog_slope,
    nonincreasing_within,
    power_of_two_checkpoints,
    ring_occupancy,
)
from randflight.directions import DirectionModel
from randflight.ppp import ByCount
from randflight.rates import RateFunction
from randflight.walk import build_trajectory, trajectory_from_arrays


def test_hits_on_first_two_intervals():
    tr = trajectory_from_arrays([0.0, 1.0, 3.0], [[1.0], [-1.0]])
    rep = detect_hits(tr, 0.5)
    assert list(rep.hit_intervals) == [0, 1]
    assert rep.last_hit_turn == 1
    assert rep.hits_in(1, 2)
    assert not rep.hits_in(2, 4)


def test_far_away_walk_never_hits():
    # starts at the origin, so only the first segment touches the box
    tr = trajectory_from_arrays([0.0, 5.0, 6.0, 7.0], [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    rep = detect_hits(tr, 1.0)
    assert list(rep.hit_intervals) == [0]
    assert rep.min_distance_after[1] == pytest.approx(5.0)
    assert rep.min_distance_after[2] == pytest.approx(np.hypot(5.0, 1.0))


def test_planar_disc_uses_projection():
    # moves only along e_3: the planar shadow sits on the origin throughout
    tr = trajectory_from_arrays([0.0, 10.0], [[0.0, 0.0, 1.0]])
    assert list(detect_hits(tr, 1.0, "PlanarDisc").hit_intervals) == [0]
    assert detect_hits(tr, 1.0, "Box").hit_intervals.tolist() == [0]


def test_planar_disc_needs_two_dimensions():
    tr = trajectory_from_arrays([0.0, 1.0], [[1.0]])
    with pytest.raises(ValueError):
        detect_hits(tr, 1.0, "PlanarDisc")


def test_report_dict_is_json_ready(power_half, rng):
    import json

    tr = build_trajectory(power_half, DirectionModel.sphere(3), ByCount(64), rng)
    d = detect_hits(tr, 1.0, "PlanarDisc").to_dict()
    assert json.loads(json.dumps(d)) == d
    assert set(d["min_distance_after"]) == {"1", "2", "4", "8", "16", "32"}


def test_min_distance_is_nondecreasing(power_half, rng):
    tr = build_trajectory(power_half, DirectionModel.orthogonal(2), ByCount(512), rng)
    mins = list(detect_hits(tr, 1.0).min_distance_after.values())
    assert mins == sorted(mins)


def test_ring_occupancy():
    tr = trajectory_from_arrays([0.0, 7.2], [[1.0, 0.0]])
    assert ring_occupancy(tr, 0) == 0
    assert ring_occupancy(tr, 1) == 7
    with pytest.raises(IndexError):
        ring_occupancy(tr, 2)


def test_concentration_examples():
    assert concentration_function(np.full(50, 3.0), 0.1).q_hat == 1.0
    assert concentration_function(np.arange(1, 1001), 0.5).q_hat == pytest.approx(1 / 1000)
    assert concentration_function(np.arange(1, 1001), 1.0).q_hat == pytest.approx(2 / 1000)
    with pytest.raises(ValueError):
        concentration_function([], 1.0)


def test_concentration_of_standard_normal():
    y = np.random.default_rng(8).standard_normal(100_000)
    q = concentration_function(y, 0.1).q_hat
    assert 0.035 <= q <= 0.045


def test_concentration_grows_with_window(rng):
    y = rng.standard_normal(5000)
    qs = [concentration_function(y, a).q_hat for a in (0.01, 0.1, 0.5, 1.0, 5.0)]
    assert qs == sorted(qs)


def test_unit_rate_gaps_are_exponential():
    rf = RateFunction.constant(1.0)
    gaps = np.concatenate([
        gap_statistics(build_trajectory(rf, DirectionModel.orthogonal(1), ByCount(100), s))[1]
        for s in range(100)
    ])
    assert abs(gaps.mean() - 1.0) <= 4 / np.sqrt(gaps.size)


def test_gap_indices():
    idx, gaps = gap_statistics(trajectory_from_arrays([0.0, 1.0, 3.0], [[1.0], [1.0]]))
    assert idx.tolist() == [0, 1]
    assert gaps.tolist() == [1.0, 2.0]


def test_envelope_rates_are_zero_at_200(power_half):
    low, high = envelope_violation_rate(power_half, 200, 500, seed=4)
    assert low == 0.0 and high == 0.0


@pytest.mark.parametrize("rf", [RateFunction.constant(1.0), RateFunction.log_power(2.0), RateFunction.power_law(1.0)])
def test_envelope_domain(rf):
    with pytest.raises(ValueError):
        envelope_violation_rate(rf, 10, 10, seed=0)


def test_checkpoints():
    assert power_of_two_checkpoints(1) == [1]
    assert power_of_two_checkpoints(100) == [1, 2, 4, 8, 16, 32, 64]


def test_loglog_slope_recovers_exponent():
    x = 2.0 ** np.arange(6, 13)
    slope, se = loglog_slope(x, 3.0 * x**-1.5)
    assert slope == pytest.approx(-1.5)
    assert se == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        loglog_slope([1, 2, 3], [1, 2, 3])


def test_nonincreasing_within():
    assert nonincreasing_within([0.5, 0.4, 0.41], [0.01, 0.01, 0.01])
    assert not nonincreasing_within([0.5, 0.4, 0.5], [0.01, 0.01, 0.01])


def test_binomial_se():
    assert binomial_se(0.5, 100) == pytest.approx(0.05)
