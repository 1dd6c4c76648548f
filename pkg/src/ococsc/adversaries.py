"""Loss-generating adversaries.

The adaptive adversary plays linear losses m.w with |m| = G.  It freezes its
direction while the player's movement inside the current epoch stays within a
threshold c/S, and otherwise opens a new epoch with a direction that has a
non-negative inner product with both the player's action and the running sum
of past directions.  With epoching disabled it re-picks every round, which is
the classical orthogonal game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import bounds, kernels
from .errors import ConfigError, ContractError, DimensionError, UnsupportedDimensionError
from .geometry import as_vector, check_same_dim, norm
from .losses import LinearLoss, QuadraticLoss

ADVERSARY_KINDS = ("alg1", "orthogonal", "fixed", "random")

QUARTIC = (16.0, 32.0, 49.0, 15.0, -1.0)


def _quartic(x: float) -> float:
    a, b, c, d, e = QUARTIC
    return (((a * x + b) * x + c) * x + d) * x + e


def quartic_optimal_constant(tol: float = 1e-10) -> float:
    """Positive root of 16x^4 + 32x^3 + 49x^2 + 15x - 1, by bisection on [0, 1].

    The polynomial is increasing on [0, inf) with p(0) = -1 < 0 < p(1), so the
    bracket holds exactly one root.
    """
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _quartic(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


QUARTIC_ROOT = quartic_optimal_constant(1e-15)


@dataclass(frozen=True)
class AdversaryThreshold:
    """Epoch constant c and the per-epoch movement allowance c/S.

    ``c = inf`` disables epoching: a fresh direction every round.
    """

    c: float
    regime: str
    threshold: float

    @property
    def every_round(self) -> bool:
        return math.isinf(self.c)


def adversary_threshold_c(S: float, D: float, T: int) -> AdversaryThreshold:
    if not S >= 0:
        raise ConfigError(f"budget S must be non-negative, got {S}")
    if not (D > 0 and T > 0):
        raise ConfigError("D and T must be positive")
    regime = bounds.convex_regime(S, D, T)
    if regime == bounds.LARGE:
        return AdversaryThreshold(math.inf, regime, math.inf)
    if regime == bounds.MID:
        c = QUARTIC_ROOT * D * D
        return AdversaryThreshold(c, regime, c / S)
    # small budgets: c = x* S^2, so c/S = x* S, which is 0 at S = 0
    return AdversaryThreshold(QUARTIC_ROOT * S * S, regime, QUARTIC_ROOT * S)


def orthogonal_pick(w, M, G: float, d: int | None = None) -> np.ndarray:
    """Direction m with |m| = G, m.w >= 0 and m.M >= 0.

    m is orthogonal to w inside span{w, M}; e1 and then e2 replace M when it is
    zero or parallel to w.  A zero w gets G * M/|M| (or G * e1 when M is zero).
    Remaining sign freedom is resolved by making the first nonzero coordinate
    positive.
    """
    w = as_vector(w, "w")
    M = as_vector(M, "M")
    check_same_dim(w, M)
    if d is not None and d != w.shape[0]:
        raise DimensionError(f"w has dimension {w.shape[0]}, expected {d}")
    if w.shape[0] < 2:
        raise UnsupportedDimensionError("the orthogonal construction needs d >= 2")
    out = np.empty_like(w)
    kernels.orthogonal_into(w, M, float(G), out)
    return out


@dataclass(frozen=True, eq=False)
class EpochState:
    epoch_index: int
    epoch_start: int
    within_epoch_switch: float
    gradient_sum: np.ndarray
    previous_direction: np.ndarray
    previous_action: np.ndarray
    threshold: float

    @property
    def every_round(self) -> bool:
        return math.isinf(self.threshold)


def algorithm1_init(w1, G: float, threshold: float) -> tuple[np.ndarray, EpochState]:
    """First-round direction, orthogonal to the player's first action."""
    w1 = as_vector(w1, "w1")
    if w1.shape[0] < 2:
        raise UnsupportedDimensionError("the orthogonal construction needs d >= 2")
    m1 = orthogonal_pick(w1, np.zeros_like(w1), G)
    state = EpochState(1, 1, 0.0, m1.copy(), m1, w1, float(threshold))
    return m1, state


def algorithm1_step(state: EpochState, w_t, t: int, G: float) -> tuple[np.ndarray, EpochState]:
    """Direction for round t >= 2 and the updated epoch bookkeeping."""
    if t < 2:
        raise ContractError("algorithm1_step starts at round 2; use algorithm1_init first")
    w_t = as_vector(w_t, "w_t")
    check_same_dim(w_t, state.previous_action)
    within = state.within_epoch_switch + norm(w_t - state.previous_action)
    if state.every_round or within > state.threshold + kernels.THRESHOLD_SLACK:
        m = orthogonal_pick(w_t, state.gradient_sum, G)
        epoch, start, within = state.epoch_index + 1, t, 0.0
    else:
        m = state.previous_direction
        epoch, start = state.epoch_index, state.epoch_start
    new = EpochState(epoch, start, within, state.gradient_sum + m, m, w_t, state.threshold)
    return m, new


def fixed_sequence_adversary(sequence: Sequence, T: int):
    """Replay ``sequence`` for T rounds, ignoring the player's actions.

    Returns a callable ``(t, w_t) -> loss`` with 1-based t.
    """
    if len(sequence) < T:
        raise ConfigError(f"sequence has {len(sequence)} losses, need {T}")
    seq = list(sequence[:T])

    def emit(t: int, w_t=None):
        return seq[t - 1]

    return emit


def quadratic_center_radius(D: float, G: float, lam: float) -> float:
    """Radius of the ball from which quadratic centers are drawn.

    Keeps lam * (D/2 + |z|) <= G so gradients stay bounded by G on the domain.
    """
    if G < lam * D:
        raise ConfigError(f"quadratic losses need G >= lambda * D (got G={G}, lambda*D={lam * D})")
    return min(D / 2.0, G / lam - D / 2.0)


def _unit_rows(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    x = rng.standard_normal((n, d))
    nrm = np.sqrt((x * x).sum(axis=1))
    # a zero row has probability zero; redraw defensively
    while np.any(nrm == 0.0):
        bad = nrm == 0.0
        x[bad] = rng.standard_normal((int(bad.sum()), d))
        nrm = np.sqrt((x * x).sum(axis=1))
    return x / nrm[:, None]


def random_directions(rng: np.random.Generator, n: int, d: int, G: float) -> np.ndarray:
    """n directions uniform on the sphere of radius G."""
    return G * _unit_rows(rng, n, d)


def random_centers(rng: np.random.Generator, n: int, d: int, radius: float) -> np.ndarray:
    """n points uniform in the ball of the given radius."""
    r = radius * rng.random(n) ** (1.0 / d)
    return _unit_rows(rng, n, d) * r[:, None]


def oblivious_sequence(kind: str, rng: np.random.Generator, T: int, d: int, G: float,
                       quadratic: bool, center_radius: float = 0.0) -> np.ndarray:
    """Loss parameters for the oblivious adversaries as a (T, d) array.

    ``random`` draws each round independently; ``fixed`` draws once and repeats.
    Rows are directions for linear losses and centers for quadratic ones.
    """
    n = T if kind == "random" else 1
    if kind not in ("random", "fixed"):
        raise ConfigError(f"{kind!r} is not an oblivious adversary")
    if quadratic:
        rows = random_centers(rng, n, d, center_radius)
    else:
        rows = random_directions(rng, n, d, G)
    if n == 1:
        rows = np.repeat(rows, T, axis=0)
    return np.ascontiguousarray(rows)


def as_losses(params: np.ndarray, quadratic: bool, lam: float | None = None) -> list:
    if quadratic:
        return [QuadraticLoss(z, lam) for z in params]
    return [LinearLoss(m) for m in params]
