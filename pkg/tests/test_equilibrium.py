from fractions import Fraction

import numpy as np
import pytest

from ebigame.equilibrium import (NormalFormGame, best_response_dynamics, dominant_strategy_report,
                                 joint_improvability, pure_nash, support_enumeration_2p)
from ebigame.errors import ConfigurationError, DomainError
from oracles import pure_nash_bruteforce

PD = NormalFormGame.from_bimatrix([[3, 0], [5, 1]], [[3, 5], [0, 1]])  # 0 cooperate, 1 defect
PENNIES = NormalFormGame.from_bimatrix([[1, -1], [-1, 1]], [[-1, 1], [1, -1]])
COORD = NormalFormGame.from_bimatrix([[2, 0], [0, 1]], [[2, 0], [0, 1]])


def test_validation():
    with pytest.raises(DomainError):
        NormalFormGame(np.zeros(3))
    with pytest.raises(DomainError):
        NormalFormGame(np.zeros((3, 2, 2)))
    with pytest.raises(DomainError):
        NormalFormGame(np.array([[[np.inf, 0], [0, 0]], [[0, 0], [0, 0]]]))
    with pytest.raises(ConfigurationError):
        pure_nash(PD, cap=3)


def test_pure_nash_examples():
    assert pure_nash(PD) == [(1, 1)]
    assert pure_nash(PENNIES) == []
    assert pure_nash(NormalFormGame(np.array([[1.0, 4.0, 4.0]]))) == [(1,), (2,)]
    assert pure_nash(COORD) == [(0, 0), (1, 1)]


@pytest.mark.parametrize("seed", range(25))
def test_pure_nash_matches_second_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    shape = tuple(int(k) for k in rng.integers(1, 4, size=n))
    payoffs = rng.integers(0, 4, size=(n, *shape)).astype(float)  # small range forces ties
    found = pure_nash(NormalFormGame(payoffs))
    assert sorted(found) == sorted(pure_nash_bruteforce(payoffs))


def _check_mixed(game, x, y):
    a, b = game.payoffs
    assert sum(x) == 1 and sum(y) == 1 and min(x) >= 0 and min(y) >= 0
    fa = [[Fraction(float(v)) for v in row] for row in a]
    fb = [[Fraction(float(v)) for v in row] for row in b]
    rows = [sum(fa[i][j] * y[j] for j in range(len(y))) for i in range(len(x))]
    cols = [sum(x[i] * fb[i][j] for i in range(len(x))) for j in range(len(y))]
    for i, p in enumerate(x):
        if p > 0:
            assert rows[i] == max(rows)
    for j, q in enumerate(y):
        if q > 0:
            assert cols[j] == max(cols)


def test_support_enumeration_examples():
    half = (Fraction(1, 2), Fraction(1, 2))
    res = support_enumeration_2p(PENNIES)
    assert res.equilibria == [(half, half)] and not res.degenerate
    res = support_enumeration_2p(PD)
    assert res.equilibria == [((0, 1), (0, 1))]
    res = support_enumeration_2p(NormalFormGame.from_bimatrix(np.ones((2, 2)), np.ones((2, 2))))
    assert res.degenerate
    with pytest.raises(DomainError):
        support_enumeration_2p(NormalFormGame(np.zeros((3, 2, 2, 2))))
    with pytest.raises(ConfigurationError):
        support_enumeration_2p(NormalFormGame(np.zeros((2, 9, 2))))


def test_coordination_game_has_three_equilibria():
    res = support_enumeration_2p(COORD)
    mixed = ((Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 3), Fraction(2, 3)))
    assert sorted(res.equilibria) == sorted([((1, 0), (1, 0)), ((0, 1), (0, 1)), mixed])


@pytest.mark.parametrize("seed", range(25))
def test_mixed_equilibria_satisfy_indifference(seed):
    rng = np.random.default_rng(100 + seed)
    m, n = (int(k) for k in rng.integers(2, 5, size=2))
    game = NormalFormGame(rng.normal(size=(2, m, n)).round(3))
    res = support_enumeration_2p(game)
    assert res.equilibria  # generic games always have one
    for x, y in res.equilibria:
        _check_mixed(game, x, y)


@pytest.mark.parametrize("seed", range(15))
def test_affine_transform_invariance(seed):
    rng = np.random.default_rng(200 + seed)
    game = NormalFormGame(rng.integers(-4, 5, size=(2, 3, 3)).astype(float))
    moved = game.payoffs.copy()
    moved[1] = 2.5 * moved[1] + 7
    other = NormalFormGame(moved)
    assert pure_nash(other) == pure_nash(game)
    assert dominant_strategy_report(other) == dominant_strategy_report(game)
    assert support_enumeration_2p(other).equilibria == support_enumeration_2p(game).equilibria


def test_best_response_dynamics():
    traj, ok = best_response_dynamics(PD, (1, 1), 5)
    assert ok and traj == [(1, 1)]
    traj, ok = best_response_dynamics(PENNIES, (0, 0), 3)
    assert not ok
    assert traj[:5] == [(0, 0), (0, 1), (1, 1), (1, 0), (0, 0)]
    traj, ok = best_response_dynamics(COORD, (0, 1), 5)
    assert ok and traj[-1] in pure_nash(COORD)
    with pytest.raises(ConfigurationError):
        best_response_dynamics(PD, (0, 0), 0)
    with pytest.raises(DomainError):
        best_response_dynamics(PD, (0,), 3)


@pytest.mark.parametrize("seed", range(20))
def test_converged_dynamics_end_in_equilibrium(seed):
    rng = np.random.default_rng(300 + seed)
    game = NormalFormGame(rng.integers(0, 5, size=(3, 2, 3, 2)).astype(float))
    traj, ok = best_response_dynamics(game, (0, 0, 0), 20)
    if ok:
        assert traj[-1] in pure_nash(game)


def test_best_response_ties_take_lowest_index():
    game = NormalFormGame.from_bimatrix([[0, 0], [1, 1], [1, 1]], [[0, 0], [0, 0], [0, 0]])
    assert game.best_responses(0, (0, 0)) == [1, 2]
    traj, _ = best_response_dynamics(game, (0, 0), 3)
    assert traj[-1] == (1, 0)


def test_dominant_strategy_report():
    assert dominant_strategy_report(PD) == [1, 1]
    assert dominant_strategy_report(PENNIES) == [None, None]
    single = NormalFormGame(np.zeros((2, 1, 2)) + np.array([0.0, 1.0]))
    assert dominant_strategy_report(single) == [None, 1]
    # weak dominance: equal against one column, better against the other
    weak = NormalFormGame.from_bimatrix([[1, 1], [1, 0]], [[0, 0], [0, 0]])
    assert dominant_strategy_report(weak) == [0, None]


def test_joint_improvability():
    assert joint_improvability(PD, (1, 1)) == ((0, 1), (0, 0))
    common = np.array([[4.0, 1.0], [2.0, 3.0]])
    assert joint_improvability(NormalFormGame.from_bimatrix(common, common), (0, 0)) is None
    # players 1 and 2 both gain by moving to action 1 together; player 0 is stuck
    pay = np.zeros((3, 2, 2, 2))
    pay[1, :, 1, 1] = 1
    pay[2, :, 1, 1] = 1
    assert joint_improvability(NormalFormGame(pay), (0, 0, 0)) == ((1, 2), (1, 1))
    with pytest.raises(DomainError):
        joint_improvability(PD, (0,))
