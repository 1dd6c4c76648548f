"""Time the game kernel with numba and with the pure-numpy fallback.

Each backend runs in its own interpreter because the choice is made at import
time from OCOCSC_DISABLE_JIT.

    python3 benchmarks/bench_kernels.py [--T 10000] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from ococsc import USE_NUMBA, GameConfig, run_game

T, repeat = int(sys.argv[1]), int(sys.argv[2])
cases = {
    "ogd-vs-alg1": GameConfig(T, 2, 2.0, 1.0, 10.0),
    "ogd-vs-orthogonal": GameConfig(T, 5, 2.0, 1.0, 400.0, adversary="orthogonal"),
    "minibatch-vs-alg1": GameConfig(T, 3, 2.0, 1.0, 20.0, player="minibatch"),
    "ogd-sc-vs-random": GameConfig(T, 2, 1.0, 2.0, 5.0, lam=1.0, player="ogd-sc", adversary="random"),
}
t0 = time.perf_counter()
run_game(GameConfig(10, 2, 2.0, 1.0, 1.0))  # pays compilation or cache load
warmup = time.perf_counter() - t0
out = {"numba": USE_NUMBA, "warmup": warmup, "cases": {}, "checksum": {}}
for name, cfg in cases.items():
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        tr = run_game(cfg)
        best = min(best, time.perf_counter() - t0)
    out["cases"][name] = best
    out["checksum"][name] = float(np.abs(tr.actions).sum())
print(json.dumps(out))
"""


def run_backend(disable: bool, T: int, repeat: int) -> dict:
    env = dict(os.environ, OCOCSC_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(T), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--T", type=int, default=10_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    jit = run_backend(False, args.T, args.repeat)
    py = run_backend(True, args.T, args.repeat)
    print(f"T={args.T}, best of {args.repeat}; warmup numba {jit['warmup']:.2f}s, numpy {py['warmup']:.2f}s")
    print(f"{'case':22s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s}  same")
    for name in jit["cases"]:
        a, b = jit["cases"][name], py["cases"][name]
        same = abs(jit["checksum"][name] - py["checksum"][name]) <= 1e-9 * max(1.0, jit["checksum"][name])
        print(f"{name:22s} {1e3 * a:11.2f} {1e3 * b:11.2f} {b / a:8.1f}x  {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
