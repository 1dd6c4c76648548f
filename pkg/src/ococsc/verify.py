"""The invariant battery behind ``ococsc verify``.

Every check is deterministic given the seed, so two runs write byte-identical
CSV files.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from . import adversaries, bounds, engine
from .engine import AuditCheck, GameConfig, audit_bounds, run_game, run_reference
from .geometry import BallDomain, project_to_ball
from .losses import (
    LinearLoss,
    QuadraticLoss,
    comparator_linear,
    comparator_quadratic,
    offline_minimizer,
)

CHECK_HEADER = ["check", "status", "value", "bound", "margin"]


def _at_most(name, value, bound):
    return engine._at_most(name, float(value), float(bound))


def _at_least(name, value, bound):
    return engine._at_least(name, float(value), float(bound))


def quartic_checks() -> list:
    x = adversaries.quartic_optimal_constant()
    return [
        _at_least("quartic/root_low", x, 0.055),
        _at_most("quartic/root_high", x, 0.057),
        _at_most("quartic/residual", abs(adversaries._quartic(x)), 1e-9),
        _at_most("quartic/bracket_low", adversaries._quartic(0.05), 0.0),
        _at_least("quartic/bracket_high", adversaries._quartic(0.06), 0.0),
    ]


def projection_checks(rng: np.random.Generator, pairs: int) -> list:
    dom = BallDomain(3, 2.0)
    worst_expansion = -math.inf
    worst_norm = 0.0
    idempotent = 0
    scale = rng.choice([0.5, 2.0, 8.0], size=(pairs, 1))
    ps = rng.standard_normal((pairs, 3)) * scale
    qs = rng.standard_normal((pairs, 3)) * scale
    for p, q in zip(ps, qs):
        pp, pq = project_to_ball(p, dom), project_to_ball(q, dom)
        worst_expansion = max(worst_expansion, np.linalg.norm(pp - pq) - np.linalg.norm(p - q))
        worst_norm = max(worst_norm, np.linalg.norm(pp))
        idempotent += not np.array_equal(project_to_ball(pp, dom), pp)
    return [
        _at_most("projection/non_expansion", worst_expansion, 1e-12),
        _at_most("projection/norm_bound", worst_norm, dom.radius * (1 + 1e-12)),
        _at_most("projection/idempotence_failures", idempotent, 0),
    ]


def step_sum_checks(T: int) -> list:
    """sum_{t<=T} 1/(t+c) <= 1/(1+c) + ln((T+c)/(1+c)), the integral comparison for a
    nonincreasing function that controls the shifted-step player's movement."""
    out = []
    for c in (0.0, 0.5, 3.0, 50.0):
        lhs = float(np.sum(1.0 / (np.arange(1, T + 1) + c)))
        rhs = 1.0 / (1.0 + c) + math.log((T + c) / (1.0 + c))
        out.append(_at_most(f"step_sum/c={c:g}", lhs, rhs + 1e-12))
    return out


def gradient_checks(rng: np.random.Generator) -> list:
    eps = 1e-5
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(2, 6))
        w = rng.standard_normal(d) * 0.3
        for f in (LinearLoss(rng.standard_normal(d)), QuadraticLoss(rng.standard_normal(d), 1.5)):
            _, g = f(w)
            for i in range(d):
                e = np.zeros(d)
                e[i] = eps
                fd = (f(w + e)[0] - f(w - e)[0]) / (2 * eps)
                worst = max(worst, abs(fd - g[i]))
    return [_at_most("losses/finite_difference_gradient", worst, 1e-5)]


def comparator_checks(rng: np.random.Generator) -> list:
    dom = BallDomain(2, 1.0)
    dirs = rng.standard_normal((5, 2))
    w_lin, v_lin = comparator_linear(dirs, dom)
    w_num, v_num = offline_minimizer([LinearLoss(m) for m in dirs], dom)
    centers = rng.standard_normal((5, 2)) * 0.8
    w_quad = comparator_quadratic(centers, 2.0, dom)
    w_qnum, _ = offline_minimizer([QuadraticLoss(z, 2.0) for z in centers], dom)
    return [
        _at_most("comparator/linear_vs_numerical", abs(v_num - v_lin), 1e-4 * abs(v_lin) + 1e-6),
        _at_most("comparator/quadratic_vs_numerical", np.linalg.norm(w_qnum - w_quad), 1e-4),
        _at_most("comparator/linear_point", np.linalg.norm(w_num - w_lin), 1e-3),
    ]


def _game_checks(cfg: GameConfig, label: str) -> list:
    report = audit_bounds(run_game(cfg))
    return [AuditCheck(f"{label}/{c.name}", c.status, c.value, c.bound, c.margin, c.note)
            for c in report.checks]


def game_checks(T: int, seed: int) -> list:
    D, G = 2.0, 1.0
    big = D * math.sqrt(T)
    budgets = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 19.0, big, 2 * big, D * T)
    out = []
    for player in ("ogd", "minibatch", "frozen"):
        for S in budgets:
            cfg = GameConfig(T, 2, D, G, S, player=player, adversary="alg1", seed=seed)
            out += _game_checks(cfg, f"alg1/{player}/S={S:g}")
    for adversary in ("orthogonal", "fixed", "random"):
        for S in (0.5, 5.0, big, D * T):
            cfg = GameConfig(T, 3, D, G, S, player="ogd", adversary=adversary, seed=seed)
            out += _game_checks(cfg, f"{adversary}/ogd/S={S:g}")
    lam, G_sc, D_sc = 1.0, 2.0, 1.0
    s_log = bounds.strongly_convex_threshold(G_sc, lam, T)
    for adversary in ("random", "fixed"):
        for S in (0.0, 1.0, 0.5 * s_log, s_log, 2 * s_log):
            cfg = GameConfig(T, 2, D_sc, G_sc, S, lam=lam, player="ogd-sc",
                             adversary=adversary, seed=seed)
            out += _game_checks(cfg, f"{adversary}/ogd-sc/S={S:.6g}")
    return out


def route_checks(seed: int) -> list:
    """The fused kernel and the per-round public operations must agree."""
    out = []
    cases = [
        GameConfig(300, 2, 2.0, 1.0, 3.0, player="ogd", adversary="alg1", seed=seed),
        GameConfig(300, 3, 2.0, 1.0, 5.0, player="minibatch", adversary="alg1", seed=seed),
        GameConfig(300, 2, 2.0, 1.0, 100.0, player="ogd", adversary="orthogonal", seed=seed),
        GameConfig(300, 2, 1.0, 2.0, 3.0, lam=1.0, player="ogd-sc", adversary="random", seed=seed),
    ]
    for cfg in cases:
        a, b = run_game(cfg), run_reference(cfg)
        diff = float(np.abs(a.actions - b.actions).max())
        label = f"route/{cfg.player}-vs-{cfg.adversary}"
        out.append(_at_most(f"{label}/actions", diff, 1e-12))
        out.append(_at_most(f"{label}/epochs_differ", float(a.epochs != b.epochs), 0.0))
    return out


def battery(quick: bool = False, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    T = 10**3 if quick else 10**4
    checks = []
    checks += quartic_checks()
    checks += projection_checks(rng, 10**4 if quick else 10**5)
    checks += step_sum_checks(T)
    checks += gradient_checks(rng)
    checks += comparator_checks(rng)
    checks += game_checks(T, seed)
    checks += route_checks(seed)
    return checks


def write_checks_csv(checks, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CHECK_HEADER)
        for c in checks:
            writer.writerow([c.name, c.status, f"{c.value:.17g}", f"{c.bound:.17g}", f"{c.margin:.17g}"])
