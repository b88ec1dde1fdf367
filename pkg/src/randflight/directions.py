"""Direction laws for the two walk models.

``Orthogonal`` (Model A) picks one of the ``2d`` signed axis vectors
uniformly. ``Sphere`` (Model B) is uniform on the unit sphere in ``R^d``,
drawn as a normalized standard Gaussian vector.

Draw encodings are part of the reproducibility contract:

* Orthogonal: one ``Generator.integers(0, 2d)`` per direction; outcome ``k``
  is ``+e_{k+1}`` for ``k < d`` and ``-e_{k-d+1}`` otherwise.
* Sphere: ``d`` consecutive ``Generator.standard_normal`` values per
  direction (numpy's ziggurat method), rows with zero norm redrawn.
* Sphere, ``method="angle"`` (``d == 2`` only): one uniform angle on
  ``[-pi, pi)`` per direction, mapped to ``(cos, sin)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .rng import make_rng

__all__ = [
    "Model",
    "DirectionModel",
    "sample_direction",
    "sample_directions",
    "projection_length",
]


class Model(str, Enum):
    ORTHOGONAL = "Orthogonal"
    SPHERE = "Sphere"


@dataclass(frozen=True)
class DirectionModel:
    model: Model
    dimension: int
    method: str = "gaussian"

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        d = self.dimension
        if isinstance(d, bool) or int(d) != d or d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
        object.__setattr__(self, "dimension", int(d))
        if self.model is Model.SPHERE and d < 2:
            raise ValueError("Sphere directions need dimension >= 2")
        if self.method not in ("gaussian", "angle"):
            raise ValueError(f"unknown sampling method {self.method!r}")
        if self.method == "angle" and (self.model is not Model.SPHERE or d != 2):
            raise ValueError("method='angle' is only defined for Sphere with d=2")

    @classmethod
    def orthogonal(cls, d: int) -> "DirectionModel":
        return cls(Model.ORTHOGONAL, d)

    @classmethod
    def sphere(cls, d: int, method: str = "gaussian") -> "DirectionModel":
        return cls(Model.SPHERE, d, method)


def sample_directions(dm: DirectionModel, n: int, rng) -> np.ndarray:
    """Draw ``n`` i.i.d. directions as an ``(n, d)`` array of unit rows."""
    rng = make_rng(rng)
    d = dm.dimension
    if dm.model is Model.ORTHOGONAL:
        k = rng.integers(0, 2 * d, size=n)
        out = np.zeros((n, d))
        out[np.arange(n), k % d] = np.where(k < d, 1.0, -1.0)
        return out
    if dm.method == "angle":
        theta = rng.uniform(-np.pi, np.pi, size=n)
        return np.column_stack((np.cos(theta), np.sin(theta)))
    g = rng.standard_normal((n, d))
    norms = np.sqrt(np.einsum("ij,ij->i", g, g))
    bad = np.nonzero(norms == 0.0)[0]
    for i in bad:
        while norms[i] == 0.0:
            g[i] = rng.standard_normal(d)
            norms[i] = np.sqrt(g[i] @ g[i])
    return g / norms[:, None]


def sample_direction(dm: DirectionModel, rng) -> np.ndarray:
    """Draw a single unit vector (a length-``d`` array)."""
    return sample_directions(dm, 1, rng)[0]


def projection_length(v) -> float | np.ndarray:
    """Length of the projection onto the first two coordinates.

    Accepts one vector or an ``(n, d)`` stack of them.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-1] < 2:
        raise ValueError("projection length needs dimension >= 2")
    out = np.hypot(v[..., 0], v[..., 1])
    return float(out) if out.ndim == 0 else out
