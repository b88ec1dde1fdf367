"""Trajectories of the continuous-time walk ``Z(t)`` and its embedded chain ``W_n``.

A trajectory is stored by its turn times ``tau_0 = 0 < tau_1 < ... < tau_n``,
the directions ``f_0 .. f_{n-1}`` and the positions ``W_0 = 0, ..., W_n``.
Between turns the walk moves at unit speed along the current direction.

Stream order for :func:`build_trajectory` is fixed: all turn times are drawn
first, then all directions, from the same generator. Changing it changes
every realization for a given seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numba
import numpy as np

from .directions import DirectionModel, sample_directions
from .ppp import ByCount, ByTime, Stop, sample_by_inversion
from .rates import RateFunction
from .rng import make_rng

__all__ = [
    "Trajectory",
    "build_trajectory",
    "trajectory_from_arrays",
    "position_at",
    "project_plane",
    "iter_segments",
    "write_csv",
]


@numba.njit(cache=True)
def _compensated_positions(gaps, directions):
    # Neumaier-compensated running sum of gap_k * f_k, per coordinate
    n, d = directions.shape
    out = np.zeros((n + 1, d))
    for j in range(d):
        s = 0.0
        c = 0.0
        for k in range(n):
            x = gaps[k] * directions[k, j]
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
            out[k + 1, j] = s + c
    return out


@dataclass(frozen=True)
class Trajectory:
    turn_times: np.ndarray
    directions: np.ndarray
    positions: np.ndarray
    model: str = "custom"

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def n_turns(self) -> int:
        """Number of completed segments ``n`` (positions run ``W_0..W_n``)."""
        return len(self.turn_times) - 1

    @property
    def horizon(self) -> float:
        """Last time at which the position is known."""
        return float(self.turn_times[-1])

    @property
    def steps(self) -> np.ndarray:
        """Embedded-walk increments ``W_{k+1} - W_k``."""
        return np.diff(self.positions, axis=0)


def trajectory_from_arrays(turn_times, directions, model: str = "custom") -> Trajectory:
    """Assemble a trajectory from explicit turn times (``tau_0 = 0`` first) and directions."""
    times = np.asarray(turn_times, dtype=float)
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if times.ndim != 1 or times[0] != 0.0:
        raise ValueError("turn_times must be 1-D and start at 0")
    if len(dirs) != len(times) - 1:
        raise ValueError("need exactly one direction per segment")
    gaps = np.diff(times)
    if np.any(gaps <= 0):
        raise ValueError("turn_times must be strictly increasing")
    positions = _compensated_positions(gaps, np.ascontiguousarray(dirs))
    for arr in (times, dirs, positions):
        arr.setflags(write=False)
    return Trajectory(times, dirs, positions, model)


def build_trajectory(rf: RateFunction, dm: DirectionModel, stop: Stop, rng) -> Trajectory:
    """Simulate one walk.

    ``ByCount(n)`` gives exactly ``n`` segments. ``ByTime(T)`` keeps every turn
    up to ``T`` plus the first turn after it, so :func:`position_at` is
    defined on all of ``[0, T]``.
    """
    rng = make_rng(rng)
    if isinstance(stop, ByTime):
        times = sample_by_inversion(rf, stop, rng, overshoot=True).times
    elif isinstance(stop, ByCount):
        times = sample_by_inversion(rf, stop, rng).times
    else:
        raise TypeError(f"unknown stop condition {stop!r}")
    dirs = sample_directions(dm, len(times), rng)
    return trajectory_from_arrays(
        np.concatenate(([0.0], times)), dirs, f"{dm.model.value}/d={dm.dimension}"
    )


def position_at(tr: Trajectory, t):
    """``Z(t) = W_{N(t)} + (t - tau_{N(t)}) f_{N(t)}`` for ``0 <= t <= horizon``.

    Accepts a scalar (returns a length-``d`` vector) or an array of times
    (returns an ``(m, d)`` array). Never extrapolates past the last turn.
    """
    ts = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(ts)) or np.any(ts < 0) or np.any(ts > tr.turn_times[-1]):
        raise IndexError(f"t outside the simulated range [0, {tr.horizon}]")
    flat = np.atleast_1d(ts)
    k = np.searchsorted(tr.turn_times, flat, side="right") - 1
    k = np.minimum(k, tr.n_turns - 1) if tr.n_turns > 0 else k
    if tr.n_turns == 0:
        out = np.zeros((len(flat), tr.dimension))
    else:
        out = tr.positions[k] + (flat - tr.turn_times[k])[:, None] * tr.directions[k]
        # exact endpoint values at turn times
        at_turn = tr.turn_times[k + 1] == flat
        out[at_turn] = tr.positions[k[at_turn] + 1]
    return out[0] if ts.ndim == 0 else out


def project_plane(tr: Trajectory) -> Trajectory:
    """Planar shadow ``(X(t), Y(t))``: first two coordinates, same turn times.

    Projected directions keep their length ``l_k <= 1`` (no renormalization).
    """
    if tr.dimension < 2:
        raise ValueError("planar projection needs dimension >= 2")
    if tr.dimension == 2:
        return tr
    dirs = tr.directions[:, :2].copy()
    pos = tr.positions[:, :2].copy()
    dirs.setflags(write=False)
    pos.setflags(write=False)
    return Trajectory(tr.turn_times, dirs, pos, tr.model + "/planar")


def iter_segments(tr: Trajectory):
    """Yield ``(k, tau_k, tau_{k+1}, W_k, W_{k+1})`` for each segment in order."""
    for k in range(tr.n_turns):
        yield k, tr.turn_times[k], tr.turn_times[k + 1], tr.positions[k], tr.positions[k + 1]


def write_csv(tr: Trajectory, fh) -> None:
    """Write the trajectory as CSV: ``k, tau_k, f_1..f_d, W_1..W_d``.

    One row per turn ``k = 0..n``; the final row has empty direction cells.
    Floats carry 17 significant digits.
    """
    d = tr.dimension
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(
        ["k", "tau_k"] + [f"f_{j + 1}" for j in range(d)] + [f"W_{j + 1}" for j in range(d)]
    )
    for k in range(tr.n_turns + 1):
        f = tr.directions[k] if k < tr.n_turns else [None] * d
        row = [k, f"{tr.turn_times[k]:.17g}"]
        row += ["" if v is None else f"{v:.17g}" for v in f]
        row += [f"{v:.17g}" for v in tr.positions[k]]
        writer.writerow(row)
