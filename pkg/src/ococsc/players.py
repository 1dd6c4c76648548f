"""Online players: constant-step OGD, shifted-step OGD, mini-batch OGD, frozen.

Each player is a :class:`PlayerState` value; the step functions return the
next state and never mutate their input.  All players start at the origin.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, ContractError
from .geometry import BallDomain, as_vector, check_same_dim

PLAYER_KINDS = ("ogd", "ogd-sc", "minibatch", "frozen")

KERNEL_CODES = {
    "frozen": kernels.PLAYER_FROZEN,
    "ogd": kernels.PLAYER_OGD,
    "ogd-sc": kernels.PLAYER_OGD_SC,
    "minibatch": kernels.PLAYER_MINIBATCH,
}


def _require_positive(**values):
    for name, v in values.items():
        if not (math.isfinite(v) and v > 0):
            raise ConfigError(f"{name} must be positive, got {v}")


def _require_budget(S):
    if not (S >= 0 and not math.isnan(S)):
        raise ConfigError(f"budget S must be non-negative, got {S}")


def step_size_convex(S: float, D: float, G: float, T: int) -> float:
    """Constant OGD step that keeps total movement within S.

    D/(G sqrt(T)) once S >= D sqrt(T) (budgets above DT included), else S/(GT).
    """
    _require_positive(D=D, G=G, T=T)
    _require_budget(S)
    if S >= D * math.sqrt(T):
        return D / (G * math.sqrt(T))
    return S / (G * T)


def shift_parameter_c(S: float, G: float, lam: float, T: int) -> float:
    """Denominator shift c of the step 1/(lam (t + c)).

    Returns ``math.inf`` at S = 0, meaning the player must never move.
    """
    _require_positive(G=G, lam=lam, T=T)
    _require_budget(S)
    if S >= 2.0 * G / lam * math.log(T + 1):
        return 0.0
    denom = math.expm1(lam * S / (2.0 * G))
    if denom == 0.0:
        return math.inf
    return max(T / denom - 1.0, 0.0)


def minibatch_budget_K(S: float, D: float) -> int:
    """Number of action changes affordable when each change may cost up to D."""
    _require_budget(S)
    _require_positive(D=D)
    return int(math.floor(S / D))


def minibatch_batch_len(T: int, K: int) -> int:
    return -(-int(T) // (int(K) + 1))


def minibatch_step_size(D: float, G: float, K: int) -> float:
    if K <= 0:
        return 0.0
    return D / (G * math.sqrt(K + 1))


@dataclass(frozen=True, eq=False)
class PlayerState:
    kind: str
    action: np.ndarray
    round: int = 1
    # constant schedule
    eta: float = 0.0
    # shifted schedule
    lam: float = 0.0
    c: float = 0.0
    frozen: bool = False
    # mini-batch bookkeeping
    batch_len: int = 1
    batch_eta: float = 0.0
    grad_sum: np.ndarray | None = None
    batch_pos: int = 0

    @property
    def dimension(self) -> int:
        return self.action.shape[0]


def ogd_state(d: int, eta: float) -> PlayerState:
    if not eta >= 0:
        raise ConfigError(f"step size must be non-negative, got {eta}")
    return PlayerState("ogd", np.zeros(d), eta=float(eta))


def ogd_sc_state(d: int, lam: float, c: float) -> PlayerState:
    _require_positive(lam=lam)
    if not c >= 0:
        raise ConfigError(f"shift c must be non-negative, got {c}")
    if math.isinf(c):
        return PlayerState("ogd-sc", np.zeros(d), lam=float(lam), c=0.0, frozen=True)
    return PlayerState("ogd-sc", np.zeros(d), lam=float(lam), c=float(c))


def minibatch_state(d: int, T: int, S: float, D: float, G: float) -> PlayerState:
    K = minibatch_budget_K(S, D)
    return PlayerState(
        "minibatch",
        np.zeros(d),
        batch_len=minibatch_batch_len(T, K),
        batch_eta=minibatch_step_size(D, G, K),
        grad_sum=np.zeros(d),
    )


def frozen_state(d: int) -> PlayerState:
    return PlayerState("frozen", np.zeros(d))


def _advance(state: PlayerState, gradient, dom: BallDomain) -> PlayerState:
    g = as_vector(gradient, "gradient")
    check_same_dim(state.action, g)
    if state.dimension != dom.dimension:
        raise ContractError("player and domain dimensions differ")
    out = np.empty_like(state.action)
    grad_sum = None if state.grad_sum is None else state.grad_sum.copy()
    scratch = grad_sum if grad_sum is not None else np.zeros_like(out)
    pos = kernels.player_update(
        KERNEL_CODES[state.kind], state.action, g, int(state.round), float(state.eta),
        float(state.lam), float(state.c), bool(state.frozen), int(state.batch_len),
        float(state.batch_eta), scratch, int(state.batch_pos), float(dom.radius), out,
    )
    return dataclasses.replace(
        state, action=out, round=state.round + 1, grad_sum=grad_sum, batch_pos=int(pos)
    )


def ogd_fixed_step(state: PlayerState, gradient, dom: BallDomain) -> PlayerState:
    """w <- project(w - eta * gradient)."""
    if state.kind != "ogd":
        raise ContractError(f"expected a constant-step OGD state, got {state.kind!r}")
    return _advance(state, gradient, dom)


def ogd_strongly_convex_step(state: PlayerState, gradient, dom: BallDomain) -> PlayerState:
    """w <- project(w - gradient / (lam (t + c))) at round t."""
    if state.kind != "ogd-sc":
        raise ContractError(f"expected a shifted-step OGD state, got {state.kind!r}")
    _require_positive(lam=state.lam)
    return _advance(state, gradient, dom)


def minibatch_ogd_step(state: PlayerState, gradient, dom: BallDomain) -> PlayerState:
    """Accumulate the gradient; at the end of each batch take one projected step
    along the batch-averaged gradient.  The action is constant inside a batch."""
    if state.kind != "minibatch":
        raise ContractError(f"expected a mini-batch state, got {state.kind!r}")
    return _advance(state, gradient, dom)


def step(state: PlayerState, gradient, dom: BallDomain) -> PlayerState:
    """Advance any player kind by one round."""
    if state.kind not in KERNEL_CODES:
        raise ContractError(f"unknown player kind {state.kind!r}")
    return _advance(state, gradient, dom)


def initial_state(kind: str, d: int, T: int, D: float, G: float, S: float,
                  lam: float | None = None) -> PlayerState:
    """Build a player with the budget-matched parameters for the given game."""
    if kind == "ogd":
        return ogd_state(d, step_size_convex(S, D, G, T))
    if kind == "ogd-sc":
        if lam is None:
            raise ConfigError("the shifted-step player needs lambda")
        return ogd_sc_state(d, lam, shift_parameter_c(S, G, lam, T))
    if kind == "minibatch":
        return minibatch_state(d, T, S, D, G)
    if kind == "frozen":
        return frozen_state(d)
    raise ConfigError(f"unknown player {kind!r}; choose from {', '.join(PLAYER_KINDS)}")
