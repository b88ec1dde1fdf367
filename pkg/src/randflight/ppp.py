"""Sampling the turn times of an inhomogeneous Poisson point process.

Inversion (time rescaling) is the production sampler: unit exponentials
``E_1, E_2, ...`` are summed and mapped through ``Lambda^{-1}``. Thinning of
a dominating homogeneous process is kept as an independent oracle for tests
and the ``verify`` suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .rates import RateFunction
from .rng import make_rng

__all__ = [
    "ByTime",
    "ByCount",
    "Stop",
    "PointProcessSample",
    "MAX_COUNT",
    "iter_inversion",
    "sample_by_inversion",
    "sample_by_thinning",
]

MAX_COUNT = 10**8
CHUNK = 4096


@dataclass(frozen=True)
class ByTime:
    """Stop at the time horizon ``T``."""

    T: float

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"ByTime horizon must be finite and > 0, got {self.T}")


@dataclass(frozen=True)
class ByCount:
    """Stop after ``n`` points."""

    n: int

    def __post_init__(self):
        if not (1 <= int(self.n) <= MAX_COUNT) or int(self.n) != self.n:
            raise ValueError(f"ByCount needs an integer 1 <= n <= {MAX_COUNT}, got {self.n}")


Stop = Union[ByTime, ByCount]


@dataclass(frozen=True)
class PointProcessSample:
    times: np.ndarray
    horizon: float | int
    method: str

    def __len__(self):
        return len(self.times)

    def count(self, t: float) -> int:
        """``N(t)``: number of points in ``(0, t]``."""
        return int(np.searchsorted(self.times, t, side="right"))


def iter_inversion(rf: RateFunction, rng, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Endless stream of consecutive PPP points, ``chunk`` at a time.

    Memory stays constant; the concatenation of the chunks is the same
    sequence that :func:`sample_by_inversion` materializes.
    """
    rng = make_rng(rng)
    offset = 0.0
    while True:
        s = offset + np.cumsum(rng.standard_exponential(chunk))
        offset = s[-1]
        yield rf.inverse(s)


def sample_by_inversion(rf: RateFunction, stop: Stop, rng, overshoot: bool = False) -> PointProcessSample:
    """Points ``tau_1 < tau_2 < ...`` obtained as ``Lambda^{-1}`` of unit-rate arrivals.

    With :class:`ByCount` exactly ``n`` exponentials are consumed from
    ``rng``; with :class:`ByTime` exponentials are drawn in blocks of
    a size fixed by ``Lambda(T)`` (at most ``CHUNK``) until the running sum passes ``Lambda(T)``. ``overshoot=True``
    (ByTime only) also returns the first point beyond ``T``.
    """
    rng = make_rng(rng)
    if isinstance(stop, ByCount):
        n = int(stop.n)
        s = np.cumsum(rng.standard_exponential(n))
        times = np.asarray(rf.inverse(s), dtype=float)
        return PointProcessSample(times, n, "Inversion")
    if not isinstance(stop, ByTime):
        raise TypeError(f"unknown stop condition {stop!r}")
    target = float(rf.cumulative(stop.T))
    # block size depends only on Lambda(T), keeping draws reproducible
    block = int(min(CHUNK, max(16, target + 4.0 * np.sqrt(target) + 16)))
    parts = []
    offset = 0.0
    while True:
        s = offset + np.cumsum(rng.standard_exponential(block))
        offset = s[-1]
        keep = s[s <= target]
        if len(keep) < block:
            parts.append(s[: len(keep) + 1] if overshoot else keep)
            break
        parts.append(keep)
        if sum(len(p) for p in parts) > MAX_COUNT:
            raise ValueError("ByTime horizon implies more than MAX_COUNT points")
    s = np.concatenate(parts)
    times = np.asarray(rf.inverse(s), dtype=float)
    if not overshoot:
        # inversion round-off must not push a point past the horizon
        times = times[times <= stop.T]
    return PointProcessSample(times, float(stop.T), "Inversion")


def sample_by_thinning(rf: RateFunction, window, majorant: float, rng) -> PointProcessSample:
    """Points of the PPP restricted to ``[a, b]`` by thinning a rate-``majorant`` process.

    Raises ``ValueError`` when ``majorant`` is below ``lambda`` anywhere on a
    1025-point grid over the window, or when the window starts before the
    support of the rate.
    """
    rng = make_rng(rng)
    a, b = (float(w) for w in window)
    if not (np.isfinite(a) and np.isfinite(b) and b > a):
        raise ValueError(f"window must be a finite interval with b > a, got {window}")
    if a < rf.support_start:
        raise ValueError(f"window starts at {a}, before the support edge {rf.support_start}")
    grid = np.linspace(a, b, 1025)
    sup = float(np.max(rf.rate(grid)))
    if not sup <= majorant * (1.0 + 1e-12):
        raise ValueError(f"majorant {majorant} is below sup lambda on the window ({sup})")
    n = rng.poisson(majorant * (b - a))
    candidates = np.sort(a + (b - a) * rng.random(n))
    keep = rng.random(n) * majorant < rf.rate(candidates)
    return PointProcessSample(candidates[keep], b, "Thinning")
