"""Exact hit tests for straight segments and rays.

All target sets are closed: touching the boundary counts as a hit. Box and
disc tests give ``1e-12`` (relative to the target size, floored at 1) of
slack toward inclusion so that analytically tangent segments are not lost
to round-off.

Each test has a vectorized form taking stacked endpoints of shape ``(m, d)``;
the scalar forms are thin wrappers.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SLACK",
    "segments_hit_box",
    "segment_hits_box",
    "segments_hit_disc",
    "segment_hits_disc",
    "segment_min_distance",
    "ray_hits_disc",
    "ring_index",
]

SLACK = 1e-12


def segments_hit_box(P, Q, rho: float) -> np.ndarray:
    """Which closed segments ``[P_i, Q_i]`` meet the box ``[-rho, rho]^d`` (slab clipping)."""
    if not rho > 0:
        raise ValueError(f"rho must be > 0, got {rho}")
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    r = rho + SLACK * max(1.0, rho)
    D = Q - P
    moving = D != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ta = (-r - P) / D
        tb = (r - P) / D
    t_enter = np.where(moving, np.minimum(ta, tb), -np.inf)
    t_exit = np.where(moving, np.maximum(ta, tb), np.inf)
    # a coordinate that does not move must already lie inside its slab
    frozen_ok = np.all(moving | (np.abs(P) <= r), axis=1)
    lo = np.maximum(0.0, t_enter.max(axis=1))
    hi = np.minimum(1.0, t_exit.min(axis=1))
    return frozen_ok & (lo <= hi)


def segment_hits_box(p, q, rho: float) -> bool:
    """True iff the closed segment ``[p, q]`` intersects ``[-rho, rho]^d``."""
    return bool(segments_hit_box(np.ravel(p)[None], np.ravel(q)[None], rho)[0])


def segment_min_distance(P, Q) -> np.ndarray:
    """Euclidean distance from the origin to each segment ``[P_i, Q_i]``."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    D = Q - P
    L2 = np.einsum("ij,ij->i", D, D)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(L2 > 0, -np.einsum("ij,ij->i", P, D) / L2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    C = P + t[:, None] * D
    return np.sqrt(np.einsum("ij,ij->i", C, C))


def segments_hit_disc(P, Q, radius: float) -> np.ndarray:
    """Which closed segments come within ``radius`` of the origin."""
    if not radius > 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    return segment_min_distance(P, Q) <= radius + SLACK * max(1.0, radius)


def segment_hits_disc(p, q, radius: float) -> bool:
    """True iff the closed planar segment ``[p, q]`` meets the disc of ``radius``."""
    return bool(segments_hit_disc(np.ravel(p)[None], np.ravel(q)[None], radius)[0])


def ray_hits_disc(origin, angle):
    """Does the ray from ``origin`` (outside the unit disc) at ``angle`` meet the unit disc?

    ``angle`` may be an array; the result then has the same shape.
    """
    o = np.asarray(origin, dtype=float)
    r2 = float(o @ o)
    if not r2 > 1.0:
        raise ValueError("ray origin must lie strictly outside the unit disc")
    angle = np.asarray(angle, dtype=float)
    # signed distance along the ray to the foot of the perpendicular from 0
    along = -(o[0] * np.cos(angle) + o[1] * np.sin(angle))
    hit = (along >= 0.0) & (r2 - along * along <= 1.0)
    return bool(hit) if hit.ndim == 0 else hit


def ring_index(p):
    """Index ``k`` of the ring ``k <= |p| < k + 1``; integer radii go to the ring they open.

    Equivalently ``floor(|p|)``. Accepts one planar point or an ``(m, 2)`` stack.
    """
    p = np.asarray(p, dtype=float)
    k = np.floor(np.hypot(p[..., 0], p[..., 1])).astype(np.int64)
    return int(k) if k.ndim == 0 else k
