import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ococsc import adversaries as adv
from ococsc.errors import ConfigError, ContractError, DimensionError, UnsupportedDimensionError

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_quartic_root():
    x = adv.quartic_optimal_constant()
    assert 0.055 <= x <= 0.057
    assert abs(adv._quartic(x)) < 1e-9
    assert adv.QUARTIC_ROOT == pytest.approx(x, abs=1e-9)


def test_quartic_constant_clears_lower_bound_constant():
    x = adv.QUARTIC_ROOT
    assert 0.5 * math.sqrt(x) / math.sqrt(1 + x) - x >= 0.05


def test_threshold_by_regime():
    D, T = 2.0, 10**4
    large = adv.adversary_threshold_c(200.0, D, T)
    assert large.every_round and large.regime == "large-S"
    mid = adv.adversary_threshold_c(10.0, D, T)
    assert mid.c == pytest.approx(adv.QUARTIC_ROOT * 4) and mid.threshold == pytest.approx(mid.c / 10)
    small = adv.adversary_threshold_c(0.5, D, T)
    assert small.c == pytest.approx(adv.QUARTIC_ROOT * 0.25) and small.threshold == pytest.approx(adv.QUARTIC_ROOT * 0.5)
    zero = adv.adversary_threshold_c(0.0, D, T)
    assert zero.threshold == 0.0 and not zero.every_round
    with pytest.raises(ConfigError):
        adv.adversary_threshold_c(-1.0, D, T)


def test_orthogonal_pick_examples():
    np.testing.assert_allclose(adv.orthogonal_pick([0.0, 0.0], [0.0, 0.0], 2.0), [2.0, 0.0])
    np.testing.assert_allclose(adv.orthogonal_pick([0.0, 0.0], [0.0, -3.0], 1.0), [0.0, -1.0])
    # M parallel to w: e1 is parallel too, e2 takes over
    np.testing.assert_allclose(adv.orthogonal_pick([1.0, 0.0], [2.0, 0.0], 1.0), [0.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(adv.orthogonal_pick([0.0, 1.0], [1.0, 1.0], 1.0), [1.0, 0.0], atol=1e-15)


def test_orthogonal_pick_errors():
    with pytest.raises(UnsupportedDimensionError):
        adv.orthogonal_pick([1.0], [0.0], 1.0)
    with pytest.raises(DimensionError):
        adv.orthogonal_pick([1.0, 0.0], [1.0, 0.0, 0.0], 1.0)
    with pytest.raises(DimensionError):
        adv.orthogonal_pick([1.0, 0.0], [1.0, 0.0], 1.0, d=3)


@settings(max_examples=400, deadline=None)
@given(st.integers(2, 6).flatmap(lambda d: st.tuples(arrays(np.float64, d, elements=coords),
                                                     arrays(np.float64, d, elements=coords))),
       st.floats(0.1, 10))
def test_orthogonal_pick_invariants(wM, G):
    w, M = wM
    m = adv.orthogonal_pick(w, M, G)
    assert np.linalg.norm(m) == pytest.approx(G, rel=1e-12)
    scale = G * (np.linalg.norm(w) + np.linalg.norm(M) + 1)
    assert m @ w >= -1e-9 * scale
    assert m @ M >= -1e-9 * scale
    if np.linalg.norm(w) > 1e-6:
        assert abs(m @ w) <= 1e-9 * scale


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, 3, elements=coords), arrays(np.float64, 3, elements=coords))
def test_orthogonal_pick_in_span_of_w_and_M(w, M):
    nw, nM = np.linalg.norm(w), np.linalg.norm(M)
    assume(nw > 1e-3 and nM > 1e-3)
    # only when M is clearly not parallel to w
    assume(np.linalg.norm(np.cross(w, M)) > 1e-3 * nw * nM)
    m = adv.orthogonal_pick(w, M, 1.0)
    normal = np.cross(w, M)
    assert abs(m @ normal) <= 1e-9 * np.linalg.norm(normal)


def test_algorithm1_epochs_follow_threshold():
    G = 1.0
    m1, st_ = adv.algorithm1_init([0.0, 0.0], G, 0.25)
    np.testing.assert_allclose(m1, [1.0, 0.0])
    path = [[0.1, 0.0], [0.2, 0.0], [0.5, 0.0], [0.5, 0.0]]
    starts = []
    for t, w in enumerate(path, start=2):
        m, st_ = adv.algorithm1_step(st_, w, t, G)
        assert np.linalg.norm(m) == pytest.approx(G)
        starts.append(st_.epoch_start)
    # movement 0.1, 0.2 stays within 0.25; 0.5 crosses it at t=4
    assert starts == [1, 1, 4, 4]
    assert st_.epoch_index == 2


def test_algorithm1_every_round():
    _, st_ = adv.algorithm1_init([0.0, 0.0], 1.0, math.inf)
    for t in range(2, 6):
        _, st_ = adv.algorithm1_step(st_, [0.0, 0.0], t, 1.0)
        assert st_.epoch_start == t


def test_algorithm1_step_contract():
    _, st_ = adv.algorithm1_init([0.0, 0.0], 1.0, 1.0)
    with pytest.raises(ContractError):
        adv.algorithm1_step(st_, [0.0, 0.0], 1, 1.0)
    with pytest.raises(UnsupportedDimensionError):
        adv.algorithm1_init([0.0], 1.0, 1.0)


def test_fixed_sequence_replays():
    emit = adv.fixed_sequence_adversary(["a", "b", "c"], 2)
    assert emit(1) == "a" and emit(2, np.zeros(2)) == "b"
    with pytest.raises(ConfigError):
        adv.fixed_sequence_adversary(["a"], 2)


def test_quadratic_center_radius():
    assert adv.quadratic_center_radius(1.0, 2.0, 1.0) == 0.5
    assert adv.quadratic_center_radius(2.0, 2.5, 1.0) == 1.0
    assert adv.quadratic_center_radius(1.0, 1.0, 1.0) == 0.5
    with pytest.raises(ConfigError):
        adv.quadratic_center_radius(1.0, 0.5, 1.0)


def test_oblivious_sequences(rng):
    dirs = adv.oblivious_sequence("random", rng, 50, 3, 2.0, quadratic=False)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 2.0)
    fixed = adv.oblivious_sequence("fixed", rng, 50, 3, 2.0, quadratic=False)
    assert np.all(fixed == fixed[0])
    centers = adv.oblivious_sequence("random", rng, 500, 2, 2.0, quadratic=True, center_radius=0.4)
    assert np.linalg.norm(centers, axis=1).max() <= 0.4
    with pytest.raises(ConfigError):
        adv.oblivious_sequence("alg1", rng, 5, 2, 1.0, quadratic=False)


def test_quadratic_centers_keep_gradients_bounded(rng):
    D, G, lam = 1.0, 2.0, 1.0
    r = adv.quadratic_center_radius(D, G, lam)
    centers = adv.random_centers(rng, 1000, 2, r)
    losses = adv.as_losses(centers, quadratic=True, lam=lam)
    from ococsc.geometry import BallDomain
    dom = BallDomain(2, D / 2)
    assert max(f.gradient_bound(dom) for f in losses) <= G
