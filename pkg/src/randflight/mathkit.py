"""Special functions and closed-form probability bounds.

``bessel_j0`` sums the Maclaurin series in double-double arithmetic for
``|x| <= J0_SWITCH`` and uses the Hankel amplitude/phase expansion, truncated
at its smallest term, beyond. ``j0_quadrature`` is an independent oracle
(trapezoid rule on the periodic integral representation) used to arbitrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "J0_SWITCH",
    "bessel_j0",
    "j0_series",
    "j0_asymptotic",
    "j0_quadrature",
    "j0_envelope",
    "BoundCheckReport",
    "verify_j0_bound",
    "poisson_tail_bound",
    "hoeffding_bound",
    "sphere_projection_law",
    "ray_hit_probability",
]

J0_SWITCH = 12.0

# -- double-double helpers (error-free transformations) ----------------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e = e + al + bl
    return _two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return _two_sum(p, e)


def _dd_div_scalar(ah, al, b):
    q1 = ah / b
    p, e = _two_prod(q1, b)
    r = ((ah - p) - e + al) / b
    return _two_sum(q1, r)


def j0_series(x) -> np.ndarray:
    """Maclaurin series of ``J0``, accumulated in double-double.

    Accurate to about 1e-16 absolute for ``|x| <= 30`` and 1e-12 at ``|x| = 50``;
    cancellation between terms of size ``~e^|x|`` limits it beyond that.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    # y = (x/2)**2 held exactly as a double-double
    yh, yl = _two_prod(x, x)
    yh, yl = yh * 0.25, yl * 0.25
    th, tl = np.ones_like(x), np.zeros_like(x)
    sh, sl = np.ones_like(x), np.zeros_like(x)
    m = 1
    while True:
        th, tl = _dd_mul(th, tl, -yh, -yl)
        th, tl = _dd_div_scalar(th, tl, float(m * m))
        sh, sl = _dd_add(sh, sl, th, tl)
        if np.all(np.abs(th) <= 1e-34 * np.maximum(1.0, np.abs(sh))) or m > 400:
            break
        m += 1
    return sh + sl


def j0_asymptotic(x) -> np.ndarray:
    """Hankel expansion ``sqrt(2/(pi x)) (P cos chi - Q sin chi)``, ``chi = x - pi/4``.

    The alternating series for ``P`` and ``Q`` are cut at their smallest term.
    Intended for ``|x| >= 8``.
    """
    x = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    P = np.zeros_like(x)
    Q = np.zeros_like(x)
    inv8x = 1.0 / (8.0 * x)
    term = np.ones_like(x)  # a_k / (8x)^k with a_k = prod_{j<=k} (2j-1)^2 / k!
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    k = 0
    while np.any(active) and k < 200:
        mag = np.abs(term)
        active &= mag < prev
        contrib = np.where(active, term, 0.0)
        if k % 2 == 0:
            P += contrib if k % 4 == 0 else -contrib
        else:
            Q += -contrib if k % 4 == 1 else contrib
        prev = np.where(active, mag, prev)
        k += 1
        term = term * (2 * k - 1) ** 2 / k * inv8x
    c, s = np.cos(x), np.sin(x)
    cos_chi = (c + s) / math.sqrt(2.0)
    sin_chi = (s - c) / math.sqrt(2.0)
    return np.sqrt(2.0 / (math.pi * x)) * (P * cos_chi - Q * sin_chi)


def bessel_j0(x):
    """Bessel function of the first kind of order zero.

    Scalars in, float out; arrays in, arrays out. Series for
    ``|x| <= J0_SWITCH``, Hankel expansion beyond.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise ValueError("bessel_j0 needs finite arguments")
    flat = np.abs(np.atleast_1d(xa)).ravel()
    out = np.empty_like(flat)
    small = flat <= J0_SWITCH
    if np.any(small):
        out[small] = j0_series(flat[small])
    if np.any(~small):
        out[~small] = j0_asymptotic(flat[~small])
    if xa.ndim == 0:
        return float(out[0])
    return out.reshape(xa.shape)


def j0_quadrature(x, panels: int = 100_000):
    """``(1/2pi) int_0^{2pi} cos(x cos phi) dphi`` by the periodic trapezoid rule."""
    phi = (2.0 * math.pi / panels) * np.arange(panels)
    cphi = np.cos(phi)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([math.fsum(np.cos(v * cphi)) / panels for v in xs.ravel()])
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(xs.shape)


def j0_envelope(x):
    """``G(x) = (1 + x^2)^(-1/4)``, the envelope of ``|J0|`` on ``x >= 0``."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or not np.all(np.isfinite(xa)):
        raise ValueError("j0_envelope is defined for finite x >= 0")
    out = (1.0 + xa * xa) ** -0.25
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BoundCheckReport:
    grid: str
    max_violation: float
    worst_x: float

    @property
    def holds(self) -> bool:
        return self.max_violation <= 0.0


def verify_j0_bound(x_max: float, step: float, chunk: int = 200_000) -> BoundCheckReport:
    """Largest value of ``|J0(x)| - G(x)`` over the grid ``0, step, ..., x_max``."""
    if not (0 < step <= 1e-2):
        raise ValueError("step must lie in (0, 1e-2]")
    if not (0 < x_max <= 1e4):
        raise ValueError("x_max must lie in (0, 1e4]")
    n = int(round(x_max / step))
    worst, worst_x = -np.inf, 0.0
    for start in range(0, n + 1, chunk):
        idx = np.arange(start, min(n + 1, start + chunk))
        xs = idx * step
        gap = np.abs(bessel_j0(xs)) - j0_envelope(xs)
        i = int(np.argmax(gap))
        if gap[i] > worst:
            worst, worst_x = float(gap[i]), float(xs[i])
    return BoundCheckReport(f"0:{x_max:g}:{step:g} ({n + 1} points)", worst, worst_x)


def poisson_tail_bound(mu: float, x: float) -> float:
    """Upper bound ``2 exp(-x^2 / (2 (mu + x)))`` on ``P(|X - mu| >= x)``, ``X ~ Poi(mu)``."""
    if not (mu > 0 and x > 0):
        raise ValueError("poisson_tail_bound needs mu > 0 and x > 0")
    return 2.0 * math.exp(-x * x / (2.0 * (mu + x)))


def hoeffding_bound(m: int, eps: float) -> float:
    """Two-sided Hoeffding bound ``2 exp(-2 eps^2 m)`` for a mean of ``m`` [0,1] variables."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return 2.0 * math.exp(-2.0 * eps * eps * m)


def sphere_projection_law(d: int, gamma: float) -> float:
    """``P(sqrt(f1^2 + f2^2) >= gamma) = (1 - gamma^2)^(d/2 - 1)`` for ``f`` uniform on the sphere."""
    if d < 2:
        raise ValueError("sphere_projection_law needs d >= 2")
    if not (0.0 < gamma < 1.0):
        raise ValueError("gamma must lie in (0, 1)")
    return (1.0 - gamma * gamma) ** (d / 2.0 - 1.0)


def ray_hit_probability(r: float) -> float:
    """Chance that a uniformly oriented ray from distance ``r > 1`` hits the unit disc."""
    if not r > 1.0:
        raise ValueError("ray_hit_probability needs r > 1")
    return math.asin(1.0 / r) / math.pi
