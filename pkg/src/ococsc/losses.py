"""Loss families, their values and gradients, and fixed comparators in hindsight."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError, DimensionError
from .geometry import BallDomain, as_vector, check_same_dim, norm, project_to_ball

# below this the summed direction is treated as zero
ZERO_DIRECTION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LinearLoss:
    """f(w) = direction . w"""

    direction: np.ndarray
    kind = "linear"

    def __post_init__(self):
        object.__setattr__(self, "direction", as_vector(self.direction, "direction"))

    @property
    def gradient_bound(self) -> float:
        return norm(self.direction)

    def __call__(self, w):
        return eval_linear(self, w)


@dataclass(frozen=True, eq=False)
class QuadraticLoss:
    """f(w) = (modulus / 2) * |w - center|^2, which is modulus-strongly convex."""

    center: np.ndarray
    modulus: float
    kind = "quadratic"

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center, "center"))
        if not (math.isfinite(self.modulus) and self.modulus > 0):
            raise ConfigError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "modulus", float(self.modulus))

    def gradient_bound(self, dom: BallDomain) -> float:
        """Largest gradient norm over ``dom``."""
        return self.modulus * (dom.radius + norm(self.center))

    def __call__(self, w):
        return eval_quadratic(self, w)


@dataclass(frozen=True, eq=False)
class GradientOracle:
    """Wraps a user-supplied convex loss: ``fn(w) -> (value, gradient)``."""

    fn: Callable[[np.ndarray], tuple]
    kind = "oracle"

    def __call__(self, w):
        value, grad = self.fn(np.asarray(w, dtype=np.float64))
        return float(value), np.asarray(grad, dtype=np.float64)


LossSpec = LinearLoss | QuadraticLoss | GradientOracle


def eval_linear(loss: LinearLoss, w) -> tuple[float, np.ndarray]:
    w = as_vector(w, "w")
    check_same_dim(loss.direction, w)
    return float(kernels.dot(loss.direction, w)), loss.direction.copy()


def eval_quadratic(loss: QuadraticLoss, w) -> tuple[float, np.ndarray]:
    w = as_vector(w, "w")
    check_same_dim(loss.center, w)
    diff = w - loss.center
    return 0.5 * loss.modulus * float(kernels.dot(diff, diff)), loss.modulus * diff


def evaluate(loss: LossSpec, w) -> tuple[float, np.ndarray]:
    """Value and gradient of any supported loss at ``w``."""
    return loss(w)


def comparator_linear(directions: Sequence, dom: BallDomain) -> tuple[np.ndarray, float]:
    """Best fixed point for a sum of linear losses and its total loss.

    The minimizer of M.w over the ball is -radius * M / |M| with value
    -radius * |M|, where M is the summed direction.  A (numerically) zero M
    makes every point optimal; the origin is returned.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    if dirs.shape[0] == 0:
        raise ContractError("need at least one direction")
    if dirs.shape[1] != dom.dimension:
        raise DimensionError(f"directions have dimension {dirs.shape[1]}, domain has {dom.dimension}")
    M = dirs.sum(axis=0)
    nM = norm(M)
    if nM < ZERO_DIRECTION_TOL:
        return dom.origin(), 0.0
    return -dom.radius * M / nM, -dom.radius * nM


def comparator_quadratic(centers: Sequence, lam: float, dom: BallDomain) -> np.ndarray:
    """Minimizer over the ball of sum_t (lam/2)|w - z_t|^2.

    The sum equals (n lam / 2)|w - mean|^2 plus a constant, so the answer is the
    projected mean and does not depend on ``lam``.
    """
    zs = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if zs.shape[0] == 0:
        raise ContractError("need at least one center")
    if zs.shape[1] != dom.dimension:
        raise DimensionError(f"centers have dimension {zs.shape[1]}, domain has {dom.dimension}")
    if not lam > 0:
        raise ConfigError(f"modulus must be positive, got {lam}")
    return project_to_ball(zs.mean(axis=0), dom)


def offline_minimizer(
    oracles: Sequence,
    dom: BallDomain,
    iterations: int = 10_000,
    G: float | None = None,
) -> tuple[np.ndarray, float]:
    """Numerically minimize the summed loss over ``dom`` by projected gradient descent.

    Steps along the averaged gradient with size D / (G sqrt(k)).  When ``G`` is
    not given, the largest averaged-gradient norm seen so far stands in for it.
    Returns the best iterate and its summed loss.
    """
    if len(oracles) == 0:
        raise ContractError("need at least one loss")
    n = len(oracles)

    def total(w):
        value = 0.0
        grad = np.zeros(dom.dimension)
        for f in oracles:
            v, g = f(w)
            value += v
            grad += g
        return value, grad

    w = dom.origin()
    best_w, best_val = w.copy(), math.inf
    g_scale = 0.0 if G is None else float(G)
    for k in range(1, iterations + 1):
        value, grad = total(w)
        if value < best_val:
            best_w, best_val = w.copy(), value
        avg = grad / n
        if G is None:
            g_scale = max(g_scale, norm(avg))
        if g_scale == 0.0:
            break
        step = dom.diameter / (g_scale * math.sqrt(k))
        w = project_to_ball(w - step * avg, dom)
    value, _ = total(w)
    if value < best_val:
        best_w, best_val = w.copy(), value
    return best_w, best_val
