import math

import pytest

from ococsc import bounds
from ococsc.adversaries import QUARTIC_ROOT


@pytest.mark.parametrize("S,expected", [(0.0, "small-S"), (1.999, "small-S"), (2.0, "mid-S"),
                                        (199.999, "mid-S"), (200.0, "large-S"), (1e9, "large-S")])
def test_regime_edges(S, expected):
    assert bounds.convex_regime(S, 2.0, 10**4) == expected


def test_convex_bound_values():
    D, G, T = 2.0, 1.0, 10**4
    assert bounds.convex_upper_bound(200.0, D, G, T) == 200.0
    assert bounds.convex_upper_bound(10.0, D, G, T) == pytest.approx(4000.0)
    assert bounds.convex_upper_bound(1.0, D, G, T) == 20000.0
    assert bounds.convex_lower_bound(500.0, D, G, T) == 100.0
    assert bounds.convex_lower_bound(10.0, D, G, T) == pytest.approx(200.0)
    assert bounds.convex_lower_bound(0.5, D, G, T) == pytest.approx(1000.0)


def test_upper_bound_monotone_then_flat():
    D, G, T = 2.0, 1.0, 10**4
    grid = [0.1 * 1.1**k for k in range(100)]
    ub = [bounds.convex_upper_bound(S, D, G, T) for S in grid]
    assert all(a >= b for a, b in zip(ub, ub[1:]))
    assert {bounds.convex_upper_bound(S, D, G, T) for S in (200, 300, 2e4)} == {200.0}


def test_strongly_convex_bounds():
    G, lam, T, D = 2.0, 1.0, 10**4, 1.0
    s_log = bounds.strongly_convex_threshold(G, lam, T)
    assert s_log == pytest.approx(4 * math.log(T + 1))
    assert bounds.strongly_convex_upper_bound(s_log, D, G, lam, T) == pytest.approx(1 + 8 * math.log(T + 1))
    assert bounds.strongly_convex_upper_bound(0.0, D, G, lam, T) == D * G * T
    small = bounds.strongly_convex_upper_bound(1.0, D, G, lam, T)
    assert small == pytest.approx(min(T / math.expm1(0.25) + 2.0, 2.0 * T))


def test_epoch_bounds():
    G, T = 1.0, 100
    c = QUARTIC_ROOT * 4.0
    assert bounds.inner_sum_bound(G, T, c / 5.0) == pytest.approx(-c * G * T / 5.0)
    assert bounds.direction_sum_bound(G, T, 5.0, c, QUARTIC_ROOT) == pytest.approx(G * T * math.sqrt(c) / math.sqrt(25 + c))
    assert bounds.epoch_count_bound(5.0, c, QUARTIC_ROOT) == pytest.approx(25 / c + 1)
    # S = 0 uses the limit S^2/c -> 1/x*
    assert bounds.epoch_count_bound(0.0, 0.0, QUARTIC_ROOT) == pytest.approx(1 / QUARTIC_ROOT + 1)
