"""Parametric turn-rate functions and their cumulative intensities.

Three families are supported:

* ``PowerLaw``: ``lambda(t) = t**-alpha`` for ``0 < alpha < 1``. With
  ``alpha == 1`` the rate is ``1/t`` on ``t >= 1`` and zero before, so that
  the cumulative intensity stays finite at the origin.
* ``LogPower``: ``lambda(t) = (ln t)**-beta`` for ``t >= e``, zero before.
* ``Constant``: ``lambda(t) = level``.

The cumulative intensity of ``LogPower`` has no elementary closed form. It is
tabulated once at construction (adaptive Gauss-Legendre panels in ``u = ln t``)
and partial panels are integrated on demand, so every instance is immutable
after ``__init__`` returns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "RateKind",
    "RateFunction",
    "cumulative_intensity",
    "inverse_cumulative_intensity",
    "envelope_constants",
]

_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
_GL_LO_NODES, _GL_LO_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER // 2)

# u = ln t range covered by the eager LogPower table (t up to ~1.1e26)
_TABLE_U_MAX = 60.0
_TABLE_MAX_PANEL = 0.25
_TABLE_REL_TOL = 1e-14
_TAIL_PANEL = 0.25


class RateKind(str, Enum):
    POWER_LAW = "PowerLaw"
    LOG_POWER = "LogPower"
    CONSTANT = "Constant"


def _log_integrand(u, beta):
    # d/du of the LogPower cumulative intensity at t = e**u
    return np.exp(u - beta * np.log(u))


def _gl_panel(a, b, beta, nodes=_GL_NODES, weights=_GL_WEIGHTS):
    """Gauss-Legendre integral of the LogPower integrand on [a, b] (broadcasts)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    u = mid[..., None] + half[..., None] * nodes
    return half * (_log_integrand(u, beta) @ weights)


def _build_log_table(beta):
    """Adaptive panel table of the LogPower cumulative intensity.

    Panels are bisected until the 8- and 16-point Gauss rules agree to
    ``_TABLE_REL_TOL`` relative (with a 1e-300 absolute floor).
    Returns panel edges in u and the cumulative integral at each edge.
    """
    edges = [1.0]
    values = []
    stack = []
    a = 1.0
    while a < _TABLE_U_MAX:
        b = min(a + _TABLE_MAX_PANEL, _TABLE_U_MAX)
        stack.append((a, b))
        while stack:
            lo, hi = stack.pop()
            fine = float(_gl_panel(lo, hi, beta))
            coarse = float(_gl_panel(lo, hi, beta, _GL_LO_NODES, _GL_LO_WEIGHTS))
            if abs(fine - coarse) <= _TABLE_REL_TOL * abs(fine) + 1e-300 or hi - lo < 1e-6:
                edges.append(hi)
                values.append(fine)
            else:
                mid = 0.5 * (lo + hi)
                # right half pushed first so panels come out in order
                stack.append((mid, hi))
                stack.append((lo, mid))
        a = b
    cumulative = np.concatenate(([0.0], np.cumsum(values)))
    return np.asarray(edges), cumulative


@dataclass(frozen=True)
class RateFunction:
    """An admissible turn rate ``lambda(t)`` together with ``Lambda`` and its inverse.

    Build instances with :meth:`power_law`, :meth:`log_power` or
    :meth:`constant`; the raw constructor validates parameters as well.
    """

    kind: RateKind
    alpha: float | None = None
    beta: float | None = None
    level: float | None = None
    _table: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        kind = RateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is RateKind.POWER_LAW:
            a = self.alpha
            if a is None or not (0.0 < a <= 1.0):
                raise ValueError(f"PowerLaw requires alpha in (0, 1], got {a!r}")
            if self.beta is not None or self.level is not None:
                raise ValueError("PowerLaw takes only alpha")
        elif kind is RateKind.LOG_POWER:
            b = self.beta
            if b is None or not (b > 0.0 and math.isfinite(b)):
                raise ValueError(f"LogPower requires beta > 0, got {b!r}")
            if self.alpha is not None or self.level is not None:
                raise ValueError("LogPower takes only beta")
            object.__setattr__(self, "_table", _build_log_table(float(b)))
        else:
            lv = self.level
            if lv is None or not (lv > 0.0 and math.isfinite(lv)):
                raise ValueError(f"Constant requires level > 0, got {lv!r}")
            if self.alpha is not None or self.beta is not None:
                raise ValueError("Constant takes only level")

    @classmethod
    def power_law(cls, alpha: float) -> "RateFunction":
        return cls(RateKind.POWER_LAW, alpha=float(alpha))

    @classmethod
    def log_power(cls, beta: float) -> "RateFunction":
        return cls(RateKind.LOG_POWER, beta=float(beta))

    @classmethod
    def constant(cls, level: float = 1.0) -> "RateFunction":
        return cls(RateKind.CONSTANT, level=float(level))

    @property
    def support_start(self) -> float:
        """Left edge of the support of the rate (where ``Lambda`` starts growing)."""
        if self.kind is RateKind.LOG_POWER:
            return math.e
        if self.kind is RateKind.POWER_LAW and self.alpha == 1.0:
            return 1.0
        return 0.0

    def params(self) -> dict:
        """Plain-dict description, suitable for JSON."""
        out = {"kind": self.kind.value}
        for name in ("alpha", "beta", "level"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    # -- lambda -------------------------------------------------------------

    def rate(self, t):
        """Evaluate ``lambda(t)``; accepts scalars or arrays."""
        t = np.asarray(t, dtype=float)
        if self.kind is RateKind.CONSTANT:
            out = np.full_like(t, self.level)
        elif self.kind is RateKind.POWER_LAW:
            with np.errstate(divide="ignore"):
                out = np.where(t >= self.support_start, t ** -self.alpha, 0.0)
            if self.alpha < 1.0:
                out = np.where(t > 0, out, np.inf)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(t >= math.e, np.log(np.maximum(t, math.e)) ** -self.beta, 0.0)
        return out[()] if out.ndim == 0 else out

    # -- Lambda -------------------------------------------------------------

    def cumulative(self, T):
        """Evaluate ``Lambda(T)``; accepts scalars or arrays of finite ``T >= 0``."""
        T = np.asarray(T, dtype=float)
        if not np.all(np.isfinite(T)):
            raise ValueError("cumulative intensity needs finite T")
        if np.any(T < 0):
            raise ValueError("cumulative intensity needs T >= 0")
        if self.kind is RateKind.CONSTANT:
            out = self.level * T
        elif self.kind is RateKind.POWER_LAW:
            if self.alpha == 1.0:
                out = np.log(np.maximum(T, 1.0))
            else:
                p = 1.0 - self.alpha
                out = T ** p / p
        else:
            out = self._log_cumulative(T)
        return out[()] if np.ndim(out) == 0 else out

    def _log_cumulative(self, T):
        edges, cum = self._table
        beta = self.beta
        shape = T.shape
        u = np.log(np.maximum(T, math.e)).ravel()
        out = np.zeros_like(u)
        inside = u <= edges[-1]
        if np.any(inside):
            ui = u[inside]
            idx = np.clip(np.searchsorted(edges, ui, side="right") - 1, 0, len(edges) - 2)
            out[inside] = cum[idx] + _gl_panel(edges[idx], ui, beta)
        for i in np.nonzero(~inside)[0]:
            out[i] = cum[-1] + self._log_tail(float(u[i]))
        return out.reshape(shape)

    def _log_tail(self, u):
        u0 = self._table[0][-1]
        n = max(1, math.ceil((u - u0) / _TAIL_PANEL))
        grid = np.linspace(u0, u, n + 1)
        return math.fsum(_gl_panel(grid[:-1], grid[1:], self.beta))

    # -- Lambda^{-1} --------------------------------------------------------

    def inverse(self, u):
        """Vectorized ``Lambda^{-1}``; LogPower uses table lookup plus Newton steps."""
        u = np.asarray(u, dtype=float)
        if not np.all(np.isfinite(u)):
            raise ValueError("inverse cumulative intensity needs finite u")
        if np.any(u < 0):
            raise ValueError("inverse cumulative intensity needs u >= 0")
        if self.kind is RateKind.CONSTANT:
            out = u / self.level
        elif self.kind is RateKind.POWER_LAW:
            if self.alpha == 1.0:
                with np.errstate(over="ignore"):
                    out = np.exp(u)
            else:
                p = 1.0 - self.alpha
                out = (p * u) ** (1.0 / p)
        else:
            out = self._log_inverse(u)
        if not np.all(np.isfinite(out)):
            raise OverflowError("Lambda^-1(u) exceeds the float range")
        return out[()] if np.ndim(out) == 0 else out

    def _log_inverse(self, v):
        edges, cum = self._table
        beta = self.beta
        flat = v.ravel()
        out = np.empty_like(flat)
        inside = flat <= cum[-1]
        vi = flat[inside]
        idx = np.clip(np.searchsorted(cum, vi, side="right") - 1, 0, len(edges) - 2)
        lo, hi = edges[idx], edges[idx + 1]
        span = cum[idx + 1] - cum[idx]
        u = lo + (hi - lo) * np.where(span > 0, (vi - cum[idx]) / span, 0.0)
        for _ in range(8):
            resid = cum[idx] + _gl_panel(lo, u, beta) - vi
            step = resid / _log_integrand(u, beta)
            u = np.clip(u - step, lo, hi)
            if np.all(np.abs(step) <= 4e-16 * u):
                break
        out[inside] = np.exp(u)
        for i in np.nonzero(~inside)[0]:
            out[i] = _bisect_inverse(self, float(flat[i]))
        return out.reshape(v.shape)


def _bisect_inverse(rf: RateFunction, u: float) -> float:
    """Bracketing root find of ``Lambda(T) = u``, polished by one Newton step."""
    lo = rf.support_start
    if u == 0.0:
        return lo
    hi = max(2.0 * lo, 1.0)
    while rf.cumulative(hi) < u:
        lo, hi = hi, 2.0 * hi
        if not math.isfinite(hi):
            raise OverflowError(f"Lambda^-1({u}) exceeds the float range")
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if rf.cumulative(mid) < u:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    lam = float(rf.rate(t))
    if lam > 0.0 and math.isfinite(lam):
        polished = t - (float(rf.cumulative(t)) - u) / lam
        if lo <= polished <= hi:
            t = polished
    return t


def cumulative_intensity(rf: RateFunction, T: float) -> float:
    """``Lambda(T) = int_0^T lambda(t) dt`` for a single ``T >= 0``."""
    T = float(T)
    if not math.isfinite(T):
        raise ValueError("T must be finite")
    return float(rf.cumulative(T))


def inverse_cumulative_intensity(rf: RateFunction, u: float) -> float:
    """Smallest ``T`` with ``Lambda(T) = u``.

    Closed forms for ``PowerLaw`` and ``Constant``; ``LogPower`` uses
    geometric bracketing followed by bisection and a single Newton polish.
    ``u = 0`` maps to the left edge of the support.
    """
    u = float(u)
    if not math.isfinite(u) or u < 0:
        raise ValueError(f"u must be finite and >= 0, got {u}")
    if u == 0.0:
        return rf.support_start
    if rf.kind is RateKind.LOG_POWER:
        return _bisect_inverse(rf, u)
    return float(rf.inverse(u))


def envelope_constants(alpha: float) -> tuple[float, float]:
    """Constants ``(c0, c1)`` bracketing ``tau_k / k**(1/(1-alpha))`` for a power-law rate.

    ``c0 = (2(1-alpha)/3)**(1/(1-alpha))`` and ``c1 = (2(1-alpha))**(1/(1-alpha))``.
    """
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    p = 1.0 - alpha
    return (2.0 * p / 3.0) ** (1.0 / p), (2.0 * p) ** (1.0 / p)
