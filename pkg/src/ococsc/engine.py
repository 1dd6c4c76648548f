"""The T-round game: configuration, transcripts, regret, switching cost and audits."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import adversaries, bounds, kernels, players
from .adversaries import ADVERSARY_KINDS, QUARTIC_ROOT
from .errors import ConfigError, ContractError
from .geometry import BallDomain
from .losses import (
    GradientOracle,
    LinearLoss,
    QuadraticLoss,
    comparator_linear,
    comparator_quadratic,
    offline_minimizer,
)
from .players import PLAYER_KINDS

BUDGET_RTOL = 1e-9
UPPER_RTOL = 1e-6
LOWER_RTOL = 1e-9
EPOCH_ATOL = 1e-6


@dataclass(frozen=True)
class GameConfig:
    T: int
    d: int
    D: float
    G: float
    S: float
    lam: float | None = None
    player: str = "ogd"
    adversary: str = "alg1"
    seed: int = 0

    def __post_init__(self):
        for name in ("T", "d", "seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ConfigError(f"{name} must be an integer, got {v}")
            object.__setattr__(self, name, int(v))
        for name in ("D", "G", "S"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.lam is not None:
            object.__setattr__(self, "lam", float(self.lam))
        self.validate()

    def validate(self) -> None:
        if self.T < 1:
            raise ConfigError(f"T must be >= 1, got {self.T}")
        if self.d < 1:
            raise ConfigError(f"d must be >= 1, got {self.d}")
        for name in ("D", "G"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive, got {v}")
        if not (math.isfinite(self.S) and self.S >= 0):
            raise ConfigError(f"S must be non-negative, got {self.S}")
        if self.lam is not None and not (math.isfinite(self.lam) and self.lam > 0):
            raise ConfigError(f"lambda must be positive, got {self.lam}")
        if self.player not in PLAYER_KINDS:
            raise ConfigError(f"unknown player {self.player!r}; choose from {', '.join(PLAYER_KINDS)}")
        if self.adversary not in ADVERSARY_KINDS:
            raise ConfigError(
                f"unknown adversary {self.adversary!r}; choose from {', '.join(ADVERSARY_KINDS)}"
            )
        if self.player == "ogd-sc" and self.lam is None:
            raise ConfigError("player ogd-sc requires lambda")
        if self.adaptive and self.d < 2:
            raise ConfigError(f"adversary {self.adversary} requires d >= 2")
        if self.quadratic and self.G < self.lam * self.D:
            raise ConfigError(
                f"quadratic losses need G >= lambda * D (G={self.G}, lambda*D={self.lam * self.D})"
            )

    @property
    def radius(self) -> float:
        return self.D / 2.0

    @property
    def domain(self) -> BallDomain:
        return BallDomain(self.d, self.radius)

    @property
    def regime(self) -> str:
        return bounds.convex_regime(self.S, self.D, self.T)

    @property
    def adaptive(self) -> bool:
        return self.adversary in ("alg1", "orthogonal")

    @property
    def quadratic(self) -> bool:
        """Oblivious adversaries play quadratic losses whenever lambda is set."""
        return self.lam is not None and not self.adaptive

    @property
    def loss_kind(self) -> str:
        return "quadratic" if self.quadratic else "linear"

    def threshold(self) -> adversaries.AdversaryThreshold:
        if self.adversary == "orthogonal":
            return adversaries.AdversaryThreshold(math.inf, bounds.LARGE, math.inf)
        return adversaries.adversary_threshold_c(self.S, self.D, self.T)

    def initial_player(self) -> players.PlayerState:
        return players.initial_state(self.player, self.d, self.T, self.D, self.G, self.S, self.lam)


@dataclass(frozen=True, eq=False)
class RoundRecord:
    t: int
    action: np.ndarray
    loss: object
    value: float
    step_switch: float


@dataclass(eq=False)
class Transcript:
    config: GameConfig
    actions: np.ndarray
    values: np.ndarray
    step_switch: np.ndarray
    total_switch: float
    loss_kind: str
    loss_params: np.ndarray | None = None
    losses: tuple | None = None
    epochs: list = field(default_factory=list)

    def __len__(self) -> int:
        return self.actions.shape[0]

    def loss(self, t: int):
        """The loss revealed at round t (1-based)."""
        if self.losses is not None:
            return self.losses[t - 1]
        if self.loss_kind == "quadratic":
            return QuadraticLoss(self.loss_params[t - 1], self.config.lam)
        return LinearLoss(self.loss_params[t - 1])

    def records(self) -> Iterator[RoundRecord]:
        for i in range(len(self)):
            yield RoundRecord(i + 1, self.actions[i].copy(), self.loss(i + 1),
                              float(self.values[i]), float(self.step_switch[i]))

    @property
    def epoch_starts(self) -> list[int]:
        return [start for _, start in self.epochs]


def _oblivious_params(config: GameConfig) -> np.ndarray:
    rng = np.random.default_rng(config.seed)
    center_radius = 0.0
    if config.quadratic:
        center_radius = adversaries.quadratic_center_radius(config.D, config.G, config.lam)
    return adversaries.oblivious_sequence(
        config.adversary, rng, config.T, config.d, config.G, config.quadratic, center_radius
    )


def run_game(config: GameConfig) -> Transcript:
    """Play the configured player against the configured adversary for T rounds."""
    config.validate()
    T, d = config.T, config.d
    state = config.initial_player()
    if config.adaptive:
        thr = config.threshold()
        adv_code = kernels.ADV_ORTHOGONAL if thr.every_round else kernels.ADV_ALG1
        threshold = 0.0 if thr.every_round else float(thr.threshold)
        sequence = np.zeros((1, d))
    else:
        adv_code = kernels.ADV_SEQUENCE
        threshold = 0.0
        sequence = _oblivious_params(config)
    loss_code = kernels.LOSS_QUADRATIC if config.quadratic else kernels.LOSS_LINEAR

    actions = np.empty((T, d))
    params = np.empty((T, d))
    values = np.empty(T)
    switches = np.empty(T)
    epoch_starts = np.zeros(T, dtype=np.int64)
    n_epochs, total = kernels.play(
        players.KERNEL_CODES[state.kind], float(state.eta), float(state.lam or 0.0),
        float(state.c), bool(state.frozen), int(state.batch_len), float(state.batch_eta),
        adv_code, threshold, float(config.G), loss_code, float(config.lam or 0.0), sequence,
        state.action,
        float(config.radius), actions, params, values, switches, epoch_starts,
    )
    epochs = [(k + 1, int(epoch_starts[k])) for k in range(n_epochs)]
    return Transcript(config, actions, values, switches, float(total), config.loss_kind,
                      params, epochs=epochs)


def _play_python(config: GameConfig, emit: Callable) -> tuple:
    """Round loop built from the public step operations.

    ``emit(t, w_t, epoch_state)`` returns ``(loss, epoch_state)``.
    """
    dom = config.domain
    state = config.initial_player()
    T, d = config.T, config.d
    actions = np.empty((T, d))
    values = np.empty(T)
    switches = np.zeros(T)
    losses = []
    epochs = []
    est = None
    for t in range(1, T + 1):
        w = state.action
        actions[t - 1] = w
        if t > 1:
            switches[t - 1] = float(np.linalg.norm(w - actions[t - 2]))
        prev_epoch = None if est is None else est.epoch_index
        loss, est = emit(t, w, est)
        if est is not None and est.epoch_index != prev_epoch:
            epochs.append((est.epoch_index, est.epoch_start))
        value, grad = loss(w)
        values[t - 1] = value
        losses.append(loss)
        state = players.step(state, grad, dom)
    return actions, values, switches, losses, epochs


def run_reference(config: GameConfig) -> Transcript:
    """Same game as :func:`run_game`, played through the public per-round operations.

    Slow; meant as an independent route for cross-checking the fused kernel.
    """
    config.validate()
    if config.adaptive:
        thr = config.threshold()

        def emit(t, w, est):
            if t == 1:
                m, est = adversaries.algorithm1_init(w, config.G, thr.threshold)
            else:
                m, est = adversaries.algorithm1_step(est, w, t, config.G)
            return LinearLoss(m), est
    else:
        params = _oblivious_params(config)
        replay = adversaries.fixed_sequence_adversary(
            adversaries.as_losses(params, config.quadratic, config.lam), config.T
        )

        def emit(t, w, est):
            return replay(t, w), est

    actions, values, switches, losses, epochs = _play_python(config, emit)
    if config.quadratic:
        params = np.array([f.center for f in losses])
    else:
        params = np.array([f.direction for f in losses])
    return Transcript(config, actions, values, switches, float(switches.sum()),
                      config.loss_kind, params, epochs=epochs)


def run_sequence(config: GameConfig, losses: Sequence) -> Transcript:
    """Play the configured player against an explicit loss sequence.

    ``losses`` may mix :class:`LinearLoss`, :class:`QuadraticLoss` and
    :class:`GradientOracle`; the configured adversary is ignored.
    """
    config.validate()
    replay = adversaries.fixed_sequence_adversary(losses, config.T)
    actions, values, switches, played, _ = _play_python(config, lambda t, w, est: (replay(t, w), None))
    kinds = {f.kind for f in played}
    kind = kinds.pop() if len(kinds) == 1 else "mixed"
    params = None
    if kind == "linear":
        params = np.array([f.direction for f in played])
    elif kind == "quadratic" and len({f.modulus for f in played}) == 1:
        params = np.array([f.center for f in played])
    return Transcript(config, actions, values, switches, float(switches.sum()), kind,
                      params, losses=tuple(played))


def switching_cost(tr: Transcript) -> float:
    """Sum of distances between consecutive actions, recomputed from the actions."""
    if len(tr) < 2:
        return 0.0
    return float(np.sqrt((np.diff(tr.actions, axis=0) ** 2).sum(axis=1)).sum())


def regret_linear(tr: Transcript) -> float:
    """sum_t m_t.w_t + (D/2) |sum_t m_t|."""
    if tr.loss_kind != "linear" or tr.loss_params is None:
        raise ContractError(f"regret_linear needs an all-linear transcript, got {tr.loss_kind}")
    m = tr.loss_params
    return float((m * tr.actions).sum() + tr.config.radius * np.linalg.norm(m.sum(axis=0)))


def _total_loss_at(tr: Transcript, w: np.ndarray) -> float:
    if tr.losses is None and tr.loss_params is not None:
        if tr.loss_kind == "linear":
            return float(tr.loss_params.sum(axis=0) @ w)
        diff = w[None, :] - tr.loss_params
        return float(0.5 * tr.config.lam * (diff * diff).sum())
    return float(sum(tr.loss(t)(w)[0] for t in range(1, len(tr) + 1)))


def best_fixed_action(tr: Transcript) -> np.ndarray:
    """The comparator: closed form for linear or single-modulus quadratic losses,
    numerical otherwise."""
    dom = tr.config.domain
    if tr.loss_kind == "linear":
        return comparator_linear(tr.loss_params, dom)[0]
    if tr.loss_kind == "quadratic" and tr.loss_params is not None:
        lam = tr.config.lam if tr.losses is None else tr.losses[0].modulus
        return comparator_quadratic(tr.loss_params, lam, dom)
    oracles = [tr.loss(t) for t in range(1, len(tr) + 1)]
    return offline_minimizer(oracles, dom)[0]


def regret_general(tr: Transcript, comparator=None) -> float:
    """sum_t f_t(w_t) - sum_t f_t(w*).

    ``comparator`` is a point, or a callable taking the transcript and returning
    one; by default :func:`best_fixed_action` is used.
    """
    if comparator is None:
        comparator = best_fixed_action
    w_star = comparator(tr) if callable(comparator) else np.asarray(comparator, dtype=np.float64)
    return float(tr.values.sum()) - _total_loss_at(tr, w_star)


def regret(tr: Transcript) -> float:
    """Regret with the exact comparator where one exists."""
    if tr.loss_kind == "linear":
        return regret_linear(tr)
    return regret_general(tr)


@dataclass(frozen=True)
class AuditCheck:
    name: str
    status: str  # "pass", "fail" or "flag"
    value: float
    bound: float
    margin: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def line(self) -> str:
        text = f"{self.status.upper():4s} {self.name}: value={self.value:.6g} bound={self.bound:.6g} margin={self.margin:.3g}"
        return text + (f" ({self.note})" if self.note else "")


def _at_most(name, value, bound, note=""):
    return AuditCheck(name, "pass" if value <= bound else "fail", value, bound, bound - value, note)


def _at_least(name, value, bound, note=""):
    return AuditCheck(name, "pass" if value >= bound else "fail", value, bound, value - bound, note)


@dataclass
class AuditReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> AuditCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _epoch_checks(tr: Transcript, thr, compliant: bool) -> list:
    cfg = tr.config
    T, G, S = cfg.T, cfg.G, cfg.S
    m = tr.loss_params
    checks = []
    inner = float((m * tr.actions).sum())
    total_dir = float(np.linalg.norm(m.sum(axis=0)))
    norms = np.sqrt((m * m).sum(axis=1))
    checks.append(_at_most("direction_norms", float(np.abs(norms - G).max()), 1e-9 * G))

    # the two inequalities required of every freshly picked direction
    M_prev = np.vstack([np.zeros(cfg.d), np.cumsum(m, axis=0)[:-1]])
    worst = 0.0
    for start in tr.epoch_starts:
        i = start - 1
        a = float(m[i] @ tr.actions[i]) / max(G * np.linalg.norm(tr.actions[i]), 1e-300)
        b = float(m[i] @ M_prev[i]) / max(G * np.linalg.norm(M_prev[i]), 1e-300)
        worst = min(worst, a, b)
    checks.append(_at_least("epoch_start_constraints", worst, -1e-9))

    if thr.every_round:
        checks.append(_at_least("orthogonal_inner_sum", inner, -EPOCH_ATOL))
        checks.append(_at_least("orthogonal_direction_growth", total_dir,
                                G * math.sqrt(T) * (1 - LOWER_RTOL)))
        return checks

    checks.append(_at_least("inner_sum", inner, bounds.inner_sum_bound(G, T, thr.threshold) - EPOCH_ATOL))

    cum = np.concatenate([[0.0], np.cumsum(tr.step_switch)])
    starts = tr.epoch_starts + [T + 1]
    interior, exit_ = 0.0, math.inf
    for k in range(len(starts) - 1):
        l, nxt = starts[k], starts[k + 1]
        interior = max(interior, cum[nxt - 1] - cum[l])
        if nxt <= T:
            exit_ = min(exit_, cum[nxt] - cum[l])
    checks.append(_at_most("epoch_interior", interior, thr.threshold + 1e-9))
    if math.isfinite(exit_):
        checks.append(_at_least("epoch_exit", exit_, thr.threshold - 1e-9))

    if compliant:
        checks.append(_at_least("direction_sum", total_dir,
                                bounds.direction_sum_bound(G, T, S, thr.c, QUARTIC_ROOT) - EPOCH_ATOL))
        checks.append(_at_most("epoch_count", float(len(tr.epochs)),
                               bounds.epoch_count_bound(S, thr.c, QUARTIC_ROOT) + 1e-9))
    else:
        for name in ("direction_sum", "epoch_count"):
            checks.append(AuditCheck(name, "flag", math.nan, math.nan, math.nan,
                                     "player exceeded the budget"))
    return checks


def audit_bounds(tr: Transcript, config: GameConfig | None = None) -> AuditReport:
    """Check a finished transcript against every guarantee that applies to it."""
    cfg = config or tr.config
    T, D, G, S = cfg.T, cfg.D, cfg.G, cfg.S
    checks = []
    total = tr.total_switch
    compliant = total <= S * (1 + BUDGET_RTOL)

    sc_short = cfg.player == "ogd-sc" and T < 3
    if sc_short and not compliant:
        checks.append(AuditCheck("budget", "flag", total, S, S - total,
                                 "T < 3: budget guarantee unproven, not asserted"))
    else:
        checks.append(_at_most("budget", total, S * (1 + BUDGET_RTOL)))
    recomputed = switching_cost(tr)
    checks.append(_at_most("switch_recompute", abs(recomputed - total),
                           BUDGET_RTOL * max(1.0, total)))
    max_norm = float(np.sqrt((tr.actions ** 2).sum(axis=1)).max())
    checks.append(_at_most("feasibility", max_norm, cfg.radius * (1 + 1e-12)))

    R = regret(tr)
    if tr.loss_kind == "linear" and compliant:
        checks.append(_at_most("trivial_cap", R, bounds.trivial_cap(D, G, T) * (1 + BUDGET_RTOL)))

    if cfg.player == "ogd":
        ub = bounds.convex_upper_bound(S, D, G, T)
        checks.append(_at_most("convex_upper", R, ub * (1 + UPPER_RTOL), cfg.regime))

    if cfg.player == "ogd-sc" and tr.loss_kind == "quadratic":
        ub = bounds.strongly_convex_upper_bound(S, D, G, cfg.lam, T)
        checks.append(_at_most("strongly_convex_upper", R, ub * (1 + UPPER_RTOL)))

    if cfg.adaptive:
        thr = cfg.threshold()
        if cfg.adversary == "orthogonal" or thr.every_round or compliant:
            lb = (bounds.LOWER_CONST_LARGE * D * G * math.sqrt(T) if cfg.adversary == "orthogonal"
                  else bounds.convex_lower_bound(S, D, G, T))
            checks.append(_at_least("convex_lower", R, lb * (1 - LOWER_RTOL), thr.regime))
        else:
            checks.append(AuditCheck("convex_lower", "flag", R, math.nan, math.nan,
                                     "player exceeded the budget"))
        checks.extend(_epoch_checks(tr, thr, compliant))
    return AuditReport(checks)


def write_transcript_csv(tr: Transcript, path) -> None:
    """One row per round: t, loss kind, step switch, loss value, then w1..wd."""
    d = tr.actions.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "loss_kind", "switch_step", "loss_value"] + [f"w{i + 1}" for i in range(d)])
        for i in range(len(tr)):
            kind = tr.loss_kind if tr.losses is None else tr.losses[i].kind
            row = [str(i + 1), kind, f"{tr.step_switch[i]:.17g}", f"{tr.values[i]:.17g}"]
            row += [f"{x:.17g}" for x in tr.actions[i]]
            writer.writerow(row)
