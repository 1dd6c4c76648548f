import math

import numpy as np
import pytest

from ococsc import bounds
from ococsc.engine import GameConfig, regret, run_game
from ococsc.errors import ConfigError
from ococsc.experiments import (
    SEED_STRIDE,
    SweepSpec,
    loglog_slope,
    read_sweep_csv,
    sweep,
    sweep_svg,
    write_sweep_csv,
)

BASE = GameConfig(400, 2, 2.0, 1.0, 0.0)


def test_spec_validation():
    with pytest.raises(ConfigError):
        SweepSpec(BASE, ())
    with pytest.raises(ConfigError):
        SweepSpec(BASE, (1.0,), repetitions=0)
    with pytest.raises(ConfigError):
        SweepSpec(BASE, (-1.0,))
    assert SweepSpec(BASE, (5.0, 1.0, 3.0)).grid == (1.0, 3.0, 5.0)


def test_logspaced_pins_endpoints():
    spec = SweepSpec.logspaced(BASE, 2.0, 200.0, 20)
    assert spec.grid[0] == 2.0 and spec.grid[-1] == 200.0 and len(spec.grid) == 20


def test_rows_ascending_with_regimes_and_bounds():
    rows = sweep(SweepSpec(BASE, (50.0, 1.0, 2.0, 40.0)))
    assert [r.S for r in rows] == [1.0, 2.0, 40.0, 50.0]
    assert [r.regime for r in rows] == ["small-S", "mid-S", "large-S", "large-S"]
    assert rows[0].lower_bound == pytest.approx(0.05 * 2 * 1 * 400)
    assert all(r.compliant for r in rows)
    assert all(r.lower_bound <= r.regret <= r.upper_bound for r in rows)


def test_repetitions_take_max_with_derived_seeds():
    base = GameConfig(300, 2, 2.0, 1.0, 0.0, adversary="random", seed=7)
    rows = sweep(SweepSpec(base, (3.0, 9.0), repetitions=3))
    for j, row in enumerate(rows):
        regrets = [regret(run_game(GameConfig(300, 2, 2.0, 1.0, row.S, adversary="random",
                                              seed=7 + j * SEED_STRIDE + i))) for i in range(3)]
        assert row.regret == max(regrets)
    assert math.isnan(rows[0].lower_bound)


def test_csv_round_trip_and_regimes(tmp_path):
    path = tmp_path / "sweep.csv"
    rows = sweep(SweepSpec(BASE, (0.5, 2.0, 39.99, 40.0, 100.0), out=str(path)))
    back = read_sweep_csv(path)
    assert back == rows
    for r in back:
        assert r.regime == bounds.convex_regime(r.S, BASE.D, BASE.T)
    assert path.read_text().splitlines()[0] == "S,regime,regret,switch_cost,upper_bound,lower_bound,compliant"


def test_unwritable_output():
    with pytest.raises(ConfigError):
        write_sweep_csv([], "/nonexistent-dir/x.csv")


def test_loglog_slope():
    S = np.array([1.0, 2.0, 4.0, 8.0])
    assert loglog_slope(S, 3.0 / S) == pytest.approx(-1.0)
    assert loglog_slope(S, 5.0 * S**0.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        loglog_slope([1.0], [1.0])


def test_svg(tmp_path):
    rows = sweep(SweepSpec(BASE, (1.0, 4.0, 40.0)))
    path = tmp_path / "s.svg"
    sweep_svg(rows, path)
    text = path.read_text()
    assert text.startswith("<svg") and text.count("<polyline") == 3
