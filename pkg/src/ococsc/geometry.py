"""Vectors, the ball-shaped decision set and projection onto it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError, DimensionError


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a fresh 1-D float64 array, rejecting empty or non-finite input."""
    arr = np.array(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ContractError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} has non-finite coordinates")
    return arr


def check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")


@dataclass(frozen=True)
class BallDomain:
    """The centered ball of the given radius in R^dimension.

    The radius is half the diameter D used throughout the bounds.
    """

    dimension: int
    radius: float

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ConfigError(f"dimension must be a positive integer, got {self.dimension}")
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ConfigError(f"radius must be positive and finite, got {self.radius}")
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "radius", float(self.radius))

    @classmethod
    def from_diameter(cls, dimension: int, D: float) -> "BallDomain":
        return cls(dimension, D / 2.0)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def origin(self) -> np.ndarray:
        return np.zeros(self.dimension)

    def contains(self, w, rtol: float = 1e-9) -> bool:
        w = np.asarray(w, dtype=np.float64)
        return w.shape == (self.dimension,) and norm(w) <= self.radius * (1.0 + rtol)


def norm(v) -> float:
    """Euclidean norm."""
    return float(kernels.norm(np.asarray(v, dtype=np.float64)))


def project_to_ball(p, dom: BallDomain) -> np.ndarray:
    """Project ``p`` onto ``dom``: interior points are returned unchanged,
    exterior points are rescaled onto the boundary sphere."""
    p = as_vector(p, "p")
    if p.shape[0] != dom.dimension:
        raise DimensionError(f"point has dimension {p.shape[0]}, domain has {dom.dimension}")
    out = np.empty_like(p)
    kernels.project_into(p, dom.radius, out)
    return out
