"""Finite normal-form games and brute-force equilibrium probes.

Payoffs are stored as an array of shape ``(n_players, *action_counts)`` so
``payoffs[p][joint]`` is player ``p``'s payoff at joint action ``joint``.
Mixed equilibria of two-player games are found by support enumeration with
exact rational elimination.

Best responses break ties toward the lowest action index. A player already
playing one of its best responses keeps it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError

DEFAULT_CELL_CAP = 2_000_000


@dataclass(frozen=True)
class NormalFormGame:
    """Payoff tensor for a finite game.

    ``action_labels`` is optional metadata, one list per player, used by the
    stage-two builder to remember what each action index stands for.
    """

    payoffs: np.ndarray
    action_labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        arr = np.asarray(self.payoffs, dtype=float)
        if arr.ndim < 2:
            raise DomainError("payoffs must have shape (n_players, *action_counts)")
        if arr.shape[0] != arr.ndim - 1:
            raise DomainError(
                f"payoff tensor has {arr.shape[0]} player slices but {arr.ndim - 1} action axes")
        if min(arr.shape[1:]) < 1:
            raise DomainError("every player needs at least one action")
        if not np.all(np.isfinite(arr)):
            raise DomainError("payoffs must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "payoffs", arr)

    @property
    def n_players(self) -> int:
        return self.payoffs.shape[0]

    @property
    def action_counts(self) -> tuple:
        return tuple(self.payoffs.shape[1:])

    @classmethod
    def from_bimatrix(cls, a, b) -> "NormalFormGame":
        return cls(np.stack([np.asarray(a, float), np.asarray(b, float)]))

    def payoff(self, player: int, joint: Sequence[int]) -> float:
        return float(self.payoffs[(player, *joint)])

    def best_responses(self, player: int, joint: Sequence[int]) -> list[int]:
        """All best-response actions of ``player`` against the others in ``joint``."""
        idx = list(joint)
        idx[player] = slice(None)
        column = self.payoffs[(player, *idx)]
        return [int(i) for i in np.flatnonzero(column == column.max())]


def _check_cap(game: NormalFormGame, cap: int):
    cells = int(np.prod(game.action_counts))
    if cells > cap:
        raise ConfigurationError(f"game has {cells} joint actions, cap is {cap}")


def pure_nash(game: NormalFormGame, cap: int = DEFAULT_CELL_CAP) -> list[tuple[int, ...]]:
    """Every joint action at which no player gains by deviating alone."""
    _check_cap(game, cap)
    stable = np.ones(game.action_counts, dtype=bool)
    for p in range(game.n_players):
        best = game.payoffs[p].max(axis=p, keepdims=True)
        stable &= game.payoffs[p] >= best
    return [tuple(int(i) for i in cell) for cell in np.argwhere(stable)]


# -- two-player support enumeration -------------------------------------------

def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Gauss-Jordan over the rationals; ``None`` when the system is singular."""
    n = len(matrix)
    aug = [row[:] + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _indifference(payoff, own_support, opp_support, opp_count):
    """Mix over ``opp_support`` making every action in ``own_support`` equally good.

    ``payoff`` is indexed [own][opp] (transposed beforehand for the column
    player). Returns (full mixture, value) or ``None``.
    """
    k = len(own_support)
    rows = [[payoff[i][j] for j in opp_support] + [Fraction(-1)] for i in own_support]
    rows.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * k + [Fraction(1)]
    sol = _solve_exact(rows, rhs)
    if sol is None:
        return None
    mix = [Fraction(0)] * opp_count
    for j, prob in zip(opp_support, sol[:-1]):
        mix[j] = prob
    return mix, sol[-1]


@dataclass
class SupportEnumerationResult:
    equilibria: list
    degenerate: bool


def support_enumeration_2p(game: NormalFormGame) -> SupportEnumerationResult:
    """All mixed equilibria of a non-degenerate two-player game.

    Payoffs are converted exactly to :class:`~fractions.Fraction`, so
    indifference and best-response checks carry no rounding. Each equilibrium
    is a pair ``(x, y)`` of tuples of Fractions. ``degenerate`` is set when some
    equilibrium mixture has more pure best responses than its support size;
    the list may then be incomplete or redundant.
    """
    if game.n_players != 2:
        raise DomainError("support enumeration needs exactly two players")
    m, n = game.action_counts
    if m > 8 or n > 8:
        raise ConfigurationError("support enumeration is limited to 8 actions per player")
    a = [[Fraction(float(game.payoffs[0, i, j])) for j in range(n)] for i in range(m)]
    b = [[Fraction(float(game.payoffs[1, i, j])) for j in range(n)] for i in range(m)]
    b_t = [[b[i][j] for i in range(m)] for j in range(n)]

    found = []
    degenerate = False
    for k in range(1, min(m, n) + 1):
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                # y makes the row player indifferent over ``rows``
                ry = _indifference(a, rows, cols, n)
                if ry is None:
                    continue
                y, u = ry
                # x makes the column player indifferent over ``cols``
                rx = _indifference(b_t, cols, rows, m)
                if rx is None:
                    continue
                x, w = rx
                if any(p < 0 for p in x) or any(p < 0 for p in y):
                    continue
                row_vals = [sum(a[i][j] * y[j] for j in range(n)) for i in range(m)]
                col_vals = [sum(x[i] * b[i][j] for i in range(m)) for j in range(n)]
                if max(row_vals) > u or max(col_vals) > w:
                    continue
                eq = (tuple(x), tuple(y))
                if eq in found:
                    continue
                found.append(eq)
                supp_x = sum(1 for p in x if p > 0)
                supp_y = sum(1 for p in y if p > 0)
                if (sum(1 for v in row_vals if v == u) > supp_y
                        or sum(1 for v in col_vals if v == w) > supp_x):
                    degenerate = True
    return SupportEnumerationResult(found, degenerate)


# -- dynamics and diagnostics -------------------------------------------------

def best_response_dynamics(game: NormalFormGame, start: Sequence[int], max_iter: int):
    """Sequential best-response play in fixed player order.

    One iteration is a full round over all players. Returns
    ``(trajectory, converged)`` where the trajectory lists the joint action
    after every single-player update, starting with ``start``. ``converged`` is
    true once a full round leaves every action unchanged.
    """
    if max_iter < 1:
        raise ConfigurationError("max_iter must be >= 1")
    joint = list(start)
    if len(joint) != game.n_players:
        raise DomainError("start profile has the wrong number of players")
    trajectory = [tuple(joint)]
    for _ in range(max_iter):
        changed = False
        for p in range(game.n_players):
            brs = game.best_responses(p, joint)
            if joint[p] not in brs:
                joint[p] = brs[0]
                changed = True
                trajectory.append(tuple(joint))
        if not changed:
            return trajectory, True
    return trajectory, False


def dominant_strategy_report(game: NormalFormGame) -> list[Optional[int]]:
    """Per player, the (weakly) dominant action or ``None``.

    Action ``a`` dominates when, against every alternative ``b``, it is never
    worse and strictly better against at least one opponent profile. Players
    with a single action get ``None``.
    """
    report = []
    for p in range(game.n_players):
        k = game.action_counts[p]
        u = np.moveaxis(game.payoffs[p], p, 0).reshape(k, -1)
        winner = None
        if k > 1:
            for a in range(k):
                if all(np.all(u[a] >= u[b]) and np.any(u[a] > u[b]) for b in range(k) if b != a):
                    winner = a
                    break
        report.append(winner)
    return report


def joint_improvability(game: NormalFormGame, profile: Sequence[int], max_size: int = 2):
    """First coalition (size 2..``max_size``) whose members can all strictly
    gain by jointly switching actions.

    Every member must switch. Coalitions are scanned by size, then
    lexicographically; deviations lexicographically. Returns
    ``(coalition, deviation)`` or ``None``.
    """
    profile = tuple(int(i) for i in profile)
    n = game.n_players
    if len(profile) != n:
        raise DomainError("profile has the wrong number of players")
    base = [game.payoff(p, profile) for p in range(n)]
    for size in range(2, min(max_size, n) + 1):
        for coalition in itertools.combinations(range(n), size):
            choices = [[a for a in range(game.action_counts[p]) if a != profile[p]] for p in coalition]
            for dev in itertools.product(*choices):
                joint = list(profile)
                for p, a in zip(coalition, dev):
                    joint[p] = a
                if all(game.payoff(p, joint) > base[p] for p in coalition):
                    return coalition, tuple(dev)
    return None
