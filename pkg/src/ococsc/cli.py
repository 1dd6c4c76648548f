"""Command line: ``ococsc run | sweep | verify``.

Exit status: 0 success, 1 invalid input, 2 a check failed.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import USE_NUMBA
from .engine import GameConfig, audit_bounds, regret, run_game, write_transcript_csv
from .errors import ConfigError
from .experiments import SweepSpec, sweep, sweep_svg
from .players import PLAYER_KINDS
from .adversaries import ADVERSARY_KINDS

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2

GAME_KEYS = {"T": int, "d": int, "D": float, "G": float, "S": float, "lambda": float,
             "player": str, "adversary": str, "seed": int}
SWEEP_KEYS = {"S-min": float, "S-max": float, "points": int, "reps": int, "svg": str}
COMMON_KEYS = {"out": str, "quick": bool}
REQUIRED = ("T", "d", "D", "G", "S")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def read_config_file(path: str, allowed: dict) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        if key not in allowed:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        conv = _bool if allowed[key] is bool else allowed[key]
        if key == "S" and "," in value:
            conv = str
        try:
            values[key] = conv(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key}: {value!r}") from exc
    return values


def _add_game_flags(p: argparse.ArgumentParser, S_type=float) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--T", type=int, default=S, help="horizon (rounds)")
    p.add_argument("--d", type=int, default=S, help="dimension")
    p.add_argument("--D", type=float, default=S, help="diameter of the ball")
    p.add_argument("--G", type=float, default=S, help="gradient bound")
    p.add_argument("--S", type=S_type, default=S, help="switching budget")
    p.add_argument("--lambda", type=float, default=S, help="strong convexity modulus")
    p.add_argument("--player", choices=PLAYER_KINDS, default=S)
    p.add_argument("--adversary", choices=ADVERSARY_KINDS, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--out", default=S, help="output CSV path")
    p.add_argument("--config", default=S, help="key = value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ococsc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="play one game and audit it")
    _add_game_flags(run)

    sw = sub.add_parser("sweep", help="regret over a grid of budgets")
    _add_game_flags(sw, S_type=str)
    sw.add_argument("--S-min", dest="S-min", type=float, default=argparse.SUPPRESS)
    sw.add_argument("--S-max", dest="S-max", type=float, default=argparse.SUPPRESS)
    sw.add_argument("--points", type=int, default=argparse.SUPPRESS)
    sw.add_argument("--reps", type=int, default=argparse.SUPPRESS)
    sw.add_argument("--svg", default=argparse.SUPPRESS, help="also write a log-log chart")

    ver = sub.add_parser("verify", help="run the invariant battery")
    ver.add_argument("--quick", action="store_true", default=argparse.SUPPRESS)
    ver.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    ver.add_argument("--out", default=argparse.SUPPRESS, help="write check results as CSV")
    ver.add_argument("--config", default=argparse.SUPPRESS)
    return parser


def _merge(ns: argparse.Namespace, allowed: dict) -> dict:
    flags = {k: v for k, v in vars(ns).items() if k not in ("command", "config")}
    values = read_config_file(ns.config, allowed) if "config" in ns else {}
    values.update(flags)
    return values


def _game_config(values: dict, S=None) -> GameConfig:
    missing = [k for k in REQUIRED if k not in values and not (k == "S" and S is not None)]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    return GameConfig(
        T=values["T"], d=values["d"], D=values["D"], G=values["G"],
        S=values["S"] if S is None else S, lam=values.get("lambda"),
        player=values.get("player", "ogd"), adversary=values.get("adversary", "alg1"),
        seed=values.get("seed", 0),
    )


def parse_config(argv) -> tuple:
    """Parse the command line into ``(command, GameConfig | SweepSpec | dict, options)``."""
    ns = build_parser().parse_args(argv)
    if ns.command == "run":
        values = _merge(ns, {**GAME_KEYS, **COMMON_KEYS})
        return "run", _game_config(values), values
    if ns.command == "sweep":
        values = _merge(ns, {**GAME_KEYS, **SWEEP_KEYS, **COMMON_KEYS})
        base = _game_config(values, S=0.0)
        reps = values.get("reps", 1)
        if "S" in values:
            try:
                grid = tuple(float(x) for x in str(values["S"]).split(",") if x.strip())
            except ValueError as exc:
                raise ConfigError(f"bad S grid {values['S']!r}") from exc
            spec = SweepSpec(base, grid, reps, values.get("out"))
        elif "S-min" in values and "S-max" in values:
            spec = SweepSpec.logspaced(base, values["S-min"], values["S-max"],
                                       values.get("points", 20), reps, values.get("out"))
        else:
            raise ConfigError("sweep needs --S a,b,c or --S-min/--S-max")
        return "sweep", spec, values
    values = _merge(ns, {"quick": bool, "seed": int, "out": str})
    return "verify", values, values


def _cmd_run(cfg: GameConfig, values: dict) -> int:
    tr = run_game(cfg)
    if "out" in values:
        try:
            write_transcript_csv(tr, values["out"])
        except OSError as exc:
            raise ConfigError(f"cannot write {values['out']}: {exc.strerror}") from exc
    report = audit_bounds(tr)
    print(f"regret={regret(tr):.10g} switching_cost={tr.total_switch:.10g} budget={cfg.S:g} "
          f"regime={cfg.regime} epochs={len(tr.epochs)}")
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_CHECK


def _cmd_sweep(spec: SweepSpec, values: dict) -> int:
    rows = sweep(spec)
    if "svg" in values:
        sweep_svg(rows, values["svg"])
    if not spec.out:
        print("S,regime,regret,switch_cost,upper_bound,lower_bound,compliant")
        for r in rows:
            print(f"{r.S:.17g},{r.regime},{r.regret:.17g},{r.switch_cost:.17g},"
                  f"{r.upper_bound:.17g},{r.lower_bound:.17g},{str(r.compliant).lower()}")
    return EXIT_OK if all(r.compliant for r in rows) else EXIT_CHECK


def _cmd_verify(values: dict) -> int:
    from .verify import battery, write_checks_csv

    start = time.perf_counter()
    checks = battery(quick=bool(values.get("quick", False)), seed=values.get("seed", 0))
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    if "out" in values:
        try:
            write_checks_csv(checks, values["out"])
        except OSError as exc:
            raise ConfigError(f"cannot write {values['out']}: {exc.strerror}") from exc
    print(f"{len(checks) - failed}/{len(checks)} checks passed in "
          f"{time.perf_counter() - start:.1f}s (numba={'on' if USE_NUMBA else 'off'})")
    return EXIT_OK if failed == 0 else EXIT_CHECK


def main(argv=None) -> int:
    try:
        command, parsed, values = parse_config(sys.argv[1:] if argv is None else argv)
        if command == "run":
            return _cmd_run(parsed, values)
        if command == "sweep":
            return _cmd_sweep(parsed, values)
        return _cmd_verify(values)
    except (UsageError, ConfigError) as exc:
        print(f"ococsc: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
