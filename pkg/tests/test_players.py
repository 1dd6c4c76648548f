import math

import numpy as np
import pytest

from ococsc import players
from ococsc.errors import ConfigError, ContractError
from ococsc.geometry import BallDomain


def test_convex_step_size_regimes():
    D, G, T = 2.0, 1.0, 10**4
    assert players.step_size_convex(10.0, D, G, T) == pytest.approx(10.0 / T)
    assert players.step_size_convex(200.0, D, G, T) == pytest.approx(D / (G * 100))
    # budgets beyond D T keep the unconstrained step
    assert players.step_size_convex(1e9, D, G, T) == pytest.approx(D / (G * 100))
    assert players.step_size_convex(0.0, D, G, T) == 0.0


def test_convex_step_rejects():
    with pytest.raises(ConfigError):
        players.step_size_convex(-1.0, 2.0, 1.0, 10)
    with pytest.raises(ConfigError):
        players.step_size_convex(1.0, 0.0, 1.0, 10)


def test_shift_parameter():
    G, lam, T = 2.0, 1.0, 10**4
    assert players.shift_parameter_c(4 * math.log(T + 1), G, lam, T) == 0.0
    assert players.shift_parameter_c(0.0, G, lam, T) == math.inf
    c = players.shift_parameter_c(1.0, G, lam, T)
    assert c == pytest.approx(T / math.expm1(0.25) - 1)
    # large enough that the clamp at zero matters
    assert players.shift_parameter_c(4 * math.log(T + 1) - 1e-9, G, lam, T) >= 0.0


def test_minibatch_parameters():
    assert players.minibatch_budget_K(5.0, 2.0) == 2
    assert players.minibatch_batch_len(10, 2) == 4
    assert players.minibatch_step_size(2.0, 1.0, 0) == 0.0
    assert players.minibatch_step_size(2.0, 1.0, 3) == pytest.approx(1.0)


def test_ogd_step_projects():
    dom = BallDomain(2, 1.0)
    s = players.ogd_state(2, 0.5)
    s = players.ogd_fixed_step(s, [-4.0, 0.0], dom)
    np.testing.assert_allclose(s.action, [1.0, 0.0])
    assert s.round == 2
    s = players.ogd_fixed_step(s, [1.0, 0.0], dom)
    np.testing.assert_allclose(s.action, [0.5, 0.0])


def test_step_dispatch_rejects_wrong_kind():
    dom = BallDomain(2, 1.0)
    with pytest.raises(ContractError):
        players.ogd_fixed_step(players.frozen_state(2), [1.0, 0.0], dom)
    with pytest.raises(ContractError):
        players.minibatch_ogd_step(players.ogd_state(2, 0.1), [1.0, 0.0], dom)


def test_shifted_step_schedule():
    dom = BallDomain(1, 10.0)
    s = players.ogd_sc_state(1, 2.0, 3.0)
    s = players.ogd_strongly_convex_step(s, [1.0], dom)
    assert s.action[0] == pytest.approx(-1.0 / (2.0 * 4.0))
    s = players.ogd_strongly_convex_step(s, [1.0], dom)
    assert s.action[0] == pytest.approx(-1.0 / 8.0 - 1.0 / 10.0)


def test_shifted_step_frozen_at_zero_budget():
    s = players.initial_state("ogd-sc", 2, 100, 1.0, 2.0, 0.0, lam=1.0)
    assert s.frozen
    s2 = players.step(s, [5.0, 5.0], BallDomain(2, 0.5))
    assert np.array_equal(s2.action, s.action)


def test_minibatch_moves_only_at_batch_ends():
    dom = BallDomain(2, 1.0)
    s = players.minibatch_state(2, T=9, S=4.0, D=2.0, G=1.0)  # K = 2, batches of 3
    assert s.batch_len == 3
    actions = []
    for _ in range(9):
        s = players.minibatch_ogd_step(s, [0.1, 0.0], dom)
        actions.append(s.action.copy())
    # actions[i] is the action after round i + 1
    moves = [i + 1 for i in range(1, 9) if not np.array_equal(actions[i], actions[i - 1])]
    assert moves == [3, 6, 9]
    assert np.array_equal(actions[1], np.zeros(2))


def test_minibatch_zero_budget_never_moves():
    dom = BallDomain(2, 1.0)
    s = players.initial_state("minibatch", 2, 50, 2.0, 1.0, 1.5)
    for _ in range(50):
        s = players.step(s, [1.0, -1.0], dom)
    assert np.array_equal(s.action, np.zeros(2))


def test_initial_state_unknown():
    with pytest.raises(ConfigError):
        players.initial_state("adagrad", 2, 10, 1.0, 1.0, 1.0)
    with pytest.raises(ConfigError):
        players.initial_state("ogd-sc", 2, 10, 1.0, 1.0, 1.0)
