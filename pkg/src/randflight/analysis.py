"""Statistics over simulated trajectories.

Recurrence detection works segment by segment, so a visit to the target set
between two turns is never missed. Reports keep per-trajectory outcomes;
nothing here asserts almost-sure behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .geometry import ring_index, segment_min_distance, segments_hit_box, segments_hit_disc
from .ppp import ByCount, sample_by_inversion
from .rates import RateFunction, RateKind, envelope_constants
from .rng import substream
from .walk import Trajectory, project_plane

__all__ = [
    "Region",
    "RecurrenceReport",
    "ConcentrationEstimate",
    "power_of_two_checkpoints",
    "detect_hits",
    "ring_occupancy",
    "concentration_function",
    "gap_statistics",
    "envelope_violation_rate",
    "binomial_se",
    "loglog_slope",
    "nonincreasing_within",
]


class Region(str, Enum):
    BOX = "Box"
    PLANAR_DISC = "PlanarDisc"


def power_of_two_checkpoints(limit: int) -> list[int]:
    """``1, 2, 4, ...`` up to and including ``limit``."""
    out = []
    c = 1
    while c <= limit:
        out.append(c)
        c *= 2
    return out


@dataclass
class RecurrenceReport:
    """Visits of one trajectory to the target set.

    ``hit_intervals`` lists every segment index ``n`` such that the walk is in
    the target during ``[tau_n, tau_{n+1}]``. ``min_distance_after[c]`` is the
    smallest Euclidean distance to the origin (of the planar projection for
    ``PlanarDisc``) over segments ``c, c+1, ...``; checkpoints are powers of two.
    """

    rho: float
    region: Region
    n_turns: int
    hit_intervals: np.ndarray
    min_distance_after: dict[int, float] = field(default_factory=dict)

    @property
    def last_hit_turn(self) -> int | None:
        return int(self.hit_intervals[-1]) if len(self.hit_intervals) else None

    def hits_in(self, start: int, stop: int) -> bool:
        """Any hit on a segment with index in ``[start, stop)``."""
        lo = np.searchsorted(self.hit_intervals, start, side="left")
        return lo < len(self.hit_intervals) and self.hit_intervals[lo] < stop

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "region": self.region.value,
            "n_turns": self.n_turns,
            "hit_intervals": [int(k) for k in self.hit_intervals],
            "last_hit_turn": self.last_hit_turn,
            "min_distance_after": {str(k): v for k, v in self.min_distance_after.items()},
        }


def detect_hits(tr: Trajectory, rho: float, region="Box") -> RecurrenceReport:
    """Find the segments along which the walk enters the box ``[-rho, rho]^d``
    (``Box``) or the planar disc of radius ``rho`` (``PlanarDisc``)."""
    region = Region(region)
    if tr.n_turns < 1:
        raise ValueError("trajectory has no segments")
    if region is Region.PLANAR_DISC:
        if tr.dimension < 2:
            raise ValueError("PlanarDisc needs dimension >= 2")
        pos = project_plane(tr).positions
        hit = segments_hit_disc(pos[:-1], pos[1:], rho)
    else:
        pos = tr.positions
        hit = segments_hit_box(pos[:-1], pos[1:], rho)
    dist = segment_min_distance(pos[:-1], pos[1:])
    tail_min = np.minimum.accumulate(dist[::-1])[::-1]
    mins = {c: float(tail_min[c]) for c in power_of_two_checkpoints(tr.n_turns - 1)}
    return RecurrenceReport(float(rho), region, tr.n_turns, np.flatnonzero(hit), mins)


def ring_occupancy(tr: Trajectory, n: int) -> int:
    """Ring index of the planar projection of ``W_n``."""
    if tr.dimension < 2:
        raise ValueError("ring occupancy needs dimension >= 2")
    if not 0 <= n <= tr.n_turns:
        raise IndexError(f"turn {n} outside 0..{tr.n_turns}")
    return ring_index(tr.positions[n, :2])


@dataclass(frozen=True)
class ConcentrationEstimate:
    a: float
    q_hat: float
    sample_size: int


def concentration_function(samples, a: float) -> ConcentrationEstimate:
    """Empirical ``Q(Y; a) = sup_x P(Y in [x, x + a])``.

    Exact for the empirical measure: an optimal window can always be taken
    to start at a sample, so sorting plus a right-bisect per sample suffices.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise ValueError("concentration_function needs at least one sample")
    if not a > 0:
        raise ValueError("window width a must be > 0")
    counts = np.searchsorted(x, x + a, side="right") - np.arange(x.size)
    return ConcentrationEstimate(float(a), float(counts.max()) / x.size, int(x.size))


def gap_statistics(tr: Trajectory):
    """Inter-turn gaps ``tau_{n+1} - tau_n`` with their indices ``n``.

    Returns ``(n, gaps)`` as two arrays.
    """
    if tr.n_turns < 1:
        raise ValueError("need at least one segment")
    gaps = np.diff(tr.turn_times)
    return np.arange(len(gaps)), gaps


def envelope_violation_rate(rf: RateFunction, k: int, replicas: int, seed: int):
    """Fractions of replicas with ``tau_k <= c0 k^(1/(1-alpha))`` and ``tau_k >= c1 k^(1/(1-alpha))``.

    Replica ``i`` draws from ``substream(seed, i)``.
    """
    if rf.kind is not RateKind.POWER_LAW or not rf.alpha < 1.0:
        raise ValueError("envelope violations are defined for PowerLaw with alpha < 1")
    if k < 1 or replicas < 1:
        raise ValueError("k and replicas must be positive")
    c0, c1 = envelope_constants(rf.alpha)
    scale = k ** (1.0 / (1.0 - rf.alpha))
    tau_k = np.array(
        [sample_by_inversion(rf, ByCount(k), substream(seed, i)).times[-1] for i in range(replicas)]
    )
    return float(np.mean(tau_k <= c0 * scale)), float(np.mean(tau_k >= c1 * scale))


# -- small statistical helpers ----------------------------------------------


def binomial_se(p, n):
    """Standard error ``sqrt(p (1 - p) / n)`` of a binomial frequency."""
    p = np.asarray(p, dtype=float)
    return np.sqrt(p * (1.0 - p) / n)


def loglog_slope(x, y):
    """OLS slope of ``log y`` on ``log x`` with its standard error.

    Needs at least four points with ``y > 0``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 4 or np.any(y <= 0) or np.any(x <= 0):
        raise ValueError("need >= 4 points with positive coordinates")
    lx, ly = np.log(x), np.log(y)
    A = np.column_stack((np.ones_like(lx), lx))
    coef, res, *_ = np.linalg.lstsq(A, ly, rcond=None)
    dof = len(x) - 2
    resid = ly - A @ coef
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return float(coef[1]), float(np.sqrt(cov[1, 1]))


def nonincreasing_within(values, ses, k: float = 2.0) -> bool:
    """``values[i+1] <= values[i] + k * sqrt(se_i^2 + se_{i+1}^2)`` for every ``i``."""
    v = np.asarray(values, dtype=float)
    s = np.asarray(ses, dtype=float)
    slack = k * np.sqrt(s[:-1] ** 2 + s[1:] ** 2)
    return bool(np.all(v[1:] <= v[:-1] + slack))
