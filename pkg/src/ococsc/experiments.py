"""Budget sweeps: regret as a function of S, with the theoretical bounds alongside."""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bounds
from .engine import GameConfig, regret, run_game
from .errors import ConfigError

SWEEP_HEADER = ["S", "regime", "regret", "switch_cost", "upper_bound", "lower_bound", "compliant"]
SEED_STRIDE = 10**6


@dataclass(frozen=True)
class SweepSpec:
    base: GameConfig
    grid: tuple
    repetitions: int = 1
    out: str | None = None

    def __post_init__(self):
        grid = tuple(sorted(float(s) for s in self.grid))
        if not grid:
            raise ConfigError("the S grid is empty")
        if any(not (math.isfinite(s) and s >= 0) for s in grid):
            raise ConfigError("every S in the grid must be finite and non-negative")
        if int(self.repetitions) != self.repetitions or self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "repetitions", int(self.repetitions))

    @classmethod
    def logspaced(cls, base: GameConfig, S_min: float, S_max: float, count: int,
                  repetitions: int = 1, out: str | None = None) -> "SweepSpec":
        if not (0 < S_min <= S_max) or count < 1:
            raise ConfigError("log-spaced grid needs 0 < S_min <= S_max and count >= 1")
        grid = np.geomspace(S_min, S_max, count)
        # pin the endpoints so regime boundaries such as S = D sqrt(T) land exactly
        grid[0], grid[-1] = S_min, S_max
        return cls(base, tuple(grid), repetitions, out)


@dataclass(frozen=True)
class SweepRow:
    S: float
    regime: str
    regret: float
    switch_cost: float
    upper_bound: float
    lower_bound: float
    compliant: bool


def upper_bound_for(cfg: GameConfig) -> float:
    if cfg.player == "ogd-sc" and cfg.quadratic:
        return bounds.strongly_convex_upper_bound(cfg.S, cfg.D, cfg.G, cfg.lam, cfg.T)
    return bounds.convex_upper_bound(cfg.S, cfg.D, cfg.G, cfg.T)


def lower_bound_for(cfg: GameConfig) -> float:
    if cfg.adversary == "alg1":
        return bounds.convex_lower_bound(cfg.S, cfg.D, cfg.G, cfg.T)
    if cfg.adversary == "orthogonal":
        return bounds.LOWER_CONST_LARGE * cfg.D * cfg.G * math.sqrt(cfg.T)
    return math.nan


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """Run every grid point; repetition i of point j uses seed base + j*1e6 + i.

    Each row keeps the worst (largest) regret and switching cost over repetitions.
    """
    rows = []
    for j, S in enumerate(spec.grid):
        worst_regret, worst_switch, compliant = -math.inf, 0.0, True
        cfg = None
        for i in range(spec.repetitions):
            cfg = dataclasses.replace(spec.base, S=S, seed=spec.base.seed + j * SEED_STRIDE + i)
            tr = run_game(cfg)
            worst_regret = max(worst_regret, regret(tr))
            worst_switch = max(worst_switch, tr.total_switch)
            compliant &= tr.total_switch <= S * (1 + 1e-9)
        rows.append(SweepRow(S, cfg.regime, worst_regret, worst_switch,
                             upper_bound_for(cfg), lower_bound_for(cfg), compliant))
    if spec.out:
        write_sweep_csv(rows, spec.out)
    return rows


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}") from exc
    with fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for r in rows:
            writer.writerow([_fmt(r.S), r.regime, _fmt(r.regret), _fmt(r.switch_cost),
                             _fmt(r.upper_bound), _fmt(r.lower_bound),
                             "true" if r.compliant else "false"])


def read_sweep_csv(path) -> list[SweepRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep header {reader.fieldnames}")
        return [
            SweepRow(float(r["S"]), r["regime"], float(r["regret"]), float(r["switch_cost"]),
                     float(r["upper_bound"]), float(r["lower_bound"]), r["compliant"] == "true")
            for r in reader
        ]


def loglog_slope(S: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log(values) against log(S)."""
    x = np.log(np.asarray(S, dtype=np.float64))
    y = np.log(np.asarray(values, dtype=np.float64))
    if x.size < 2:
        raise ValueError("need at least two points for a slope")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def sweep_svg(rows: Sequence[SweepRow], path, width: int = 640, height: int = 420) -> None:
    """Log-log line chart of measured regret and both bound columns."""
    pad = 60
    series = {
        "regret": ("#1f77b4", [r.regret for r in rows]),
        "upper bound": ("#d62728", [r.upper_bound for r in rows]),
        "lower bound": ("#2ca02c", [r.lower_bound for r in rows]),
    }
    xs = np.log10([r.S for r in rows if r.S > 0])
    if xs.size == 0:
        raise ValueError("nothing to plot: all S are zero")
    ys = np.log10([v for _, vals in series.values() for v in vals if v > 0 and math.isfinite(v)])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1

    def px(s):
        return pad + (math.log10(s) - x0) / (x1 - x0) * (width - 2 * pad)

    def py(v):
        return height - pad - (math.log10(v) - y0) / (y1 - y0) * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 15}" text-anchor="middle">log10 S</text>',
        f'<text x="15" y="{height / 2}" transform="rotate(-90 15 {height / 2})" '
        f'text-anchor="middle">log10 regret</text>',
        f'<text x="{pad}" y="{height - pad + 18}">{x0:.2f}</text>',
        f'<text x="{width - pad}" y="{height - pad + 18}" text-anchor="end">{x1:.2f}</text>',
        f'<text x="{pad - 5}" y="{height - pad}" text-anchor="end">{y0:.2f}</text>',
        f'<text x="{pad - 5}" y="{pad + 5}" text-anchor="end">{y1:.2f}</text>',
    ]
    for k, (label, (color, vals)) in enumerate(series.items()):
        pts = [f"{px(r.S):.2f},{py(v):.2f}" for r, v in zip(rows, vals)
               if r.S > 0 and v > 0 and math.isfinite(v)]
        if pts:
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{" ".join(pts)}"/>')
        parts.append(f'<text x="{width - pad - 110}" y="{pad + 18 * k}" fill="{color}">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
