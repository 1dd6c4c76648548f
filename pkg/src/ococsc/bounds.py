"""Regime labels and the closed-form regret and switching guarantees.

Convex losses split the budget S into three regimes by comparing it with the
diameter D and with D*sqrt(T); strongly convex losses split on (2G/lam)*ln(T+1).
"""

from __future__ import annotations

import math

SMALL = "small-S"
MID = "mid-S"
LARGE = "large-S"
REGIMES = (SMALL, MID, LARGE)

# Fraction of the attainable lower-bound constants, per regime.
LOWER_CONST_LARGE = 0.5
LOWER_CONST = 0.05


def convex_regime(S: float, D: float, T: int) -> str:
    if S >= D * math.sqrt(T):
        return LARGE
    if S >= D:
        return MID
    return SMALL


def convex_upper_bound(S: float, D: float, G: float, T: int) -> float:
    """Regret guaranteed by OGD with the budget-matched constant step."""
    regime = convex_regime(S, D, T)
    if regime == LARGE:
        return D * G * math.sqrt(T)
    if regime == MID:
        return D * G * D * T / S
    return D * G * T


def convex_lower_bound(S: float, D: float, G: float, T: int) -> float:
    """Regret the adaptive adversary forces on any budget-respecting player."""
    regime = convex_regime(S, D, T)
    if regime == LARGE:
        return LOWER_CONST_LARGE * D * G * math.sqrt(T)
    if regime == MID:
        return LOWER_CONST * D * G * D * T / S
    return LOWER_CONST * D * G * T


def trivial_cap(D: float, G: float, T: int) -> float:
    return D * G * T


def strongly_convex_threshold(G: float, lam: float, T: int) -> float:
    """Budget above which the shifted step needs no shift at all."""
    return 2.0 * G / lam * math.log(T + 1)


def strongly_convex_upper_bound(S: float, D: float, G: float, lam: float, T: int) -> float:
    if S >= strongly_convex_threshold(G, lam, T):
        return lam * D * D + 2.0 * G * G / lam * math.log(T + 1)
    denom = math.expm1(lam * S / (2.0 * G))
    if denom == 0.0:
        return D * G * T
    return min(lam * T * D * D / denom + G * S, D * G * T)


def strongly_convex_switch_bound(G: float, lam: float, T: int, c: float) -> float:
    """Upper bound on the total movement of the shifted-step player."""
    return 2.0 * G / lam * math.log(T / (1.0 + c) + 1.0)


def inner_sum_bound(G: float, T: int, threshold: float) -> float:
    """Lower bound on sum_t m_t.w_t under the epoch adversary (threshold = c/S)."""
    return -threshold * G * T


def _budget_sq_over_c(S: float, c: float, root: float) -> float:
    # S^2/c; at S = 0 the small-budget choice c = x* S^2 gives the limit 1/x*
    if S == 0.0:
        return 1.0 / root
    return S * S / c


def direction_sum_bound(G: float, T: int, S: float, c: float, root: float) -> float:
    """Lower bound on |sum_t m_t| for a budget-respecting player."""
    return G * T / math.sqrt(_budget_sq_over_c(S, c, root) + 1.0)


def epoch_count_bound(S: float, c: float, root: float) -> float:
    return _budget_sq_over_c(S, c, root) + 1.0
