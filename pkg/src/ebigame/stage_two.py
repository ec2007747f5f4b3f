"""Quarterly post-grant games: exercise, hedging and effort under dilution.

Each quarter the employees (and optionally the firm, which sets an exercise
cap) pick actions from a small grid. A joint action fixes how many option
units are exercised; the new shares dilute everyone else's stock, depress the
realized price through ``dilution_sensitivity`` and feed the quarter's
stage-two game values. A share of each player's realized value carries into
the next quarter's utility term.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .coalition import CharacteristicFunction
from .equilibrium import NormalFormGame, pure_nash
from .errors import ConfigurationError, DomainError
from .payoff_core import (
    CostLedger,
    EffortPair,
    HorizonSpec,
    ModifierSet,
    stage2_value_company,
    stage2_value_employee,
)

FIRM = "firm"
PRICE_FLOOR = 1e-3
POLICIES = ("myopic-best-response", "always-hold", "threshold-exercise")
HOLD = 0  # index of the no-exercise action in every menu (zero cap for the firm)


@dataclass(frozen=True)
class EmployeePosition:
    """One employee's grant and holdings.

    ``vested_fraction`` is the vested share of ``granted`` option units;
    ``exercised`` counts units already converted into ``shares_held``.
    """

    player_id: str
    granted: float
    strike: float
    vested_fraction: float = 0.0
    exercised: float = 0.0
    shares_held: float = 0.0
    carry_over: float = 0.0

    def __post_init__(self):
        for name in ("granted", "strike", "exercised", "shares_held"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{self.player_id}.{name} must be finite and >= 0")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.vested_fraction <= 1.0:
            raise DomainError(f"{self.player_id}.vested_fraction must lie in [0, 1]")
        if self.exercised > self.granted:
            raise DomainError(f"{self.player_id} cannot have exercised more units than granted")
        object.__setattr__(self, "vested_fraction", float(self.vested_fraction))
        object.__setattr__(self, "carry_over", float(self.carry_over))

    @property
    def outstanding_ebi(self) -> float:
        return self.granted - self.exercised

    @property
    def available(self) -> float:
        """Vested, unexercised units."""
        return max(0.0, self.vested_fraction * self.granted - self.exercised)


@dataclass(frozen=True)
class QuarterState:
    quarter_index: int
    share_price: float
    shares_outstanding: float
    positions: tuple
    firm_carry_over: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.share_price) and self.share_price > 0):
            raise DomainError("share_price must be finite and > 0")
        if not (math.isfinite(self.shares_outstanding) and self.shares_outstanding > 0):
            raise DomainError("shares_outstanding must be finite and > 0")
        object.__setattr__(self, "positions", tuple(self.positions))
        ids = [p.player_id for p in self.positions]
        if len(set(ids)) != len(ids):
            raise DomainError("employee ids must be unique")
        if FIRM in ids:
            raise DomainError(f"{FIRM!r} is reserved for the firm player")

    def position(self, player_id: str) -> EmployeePosition:
        for p in self.positions:
            if p.player_id == player_id:
                return p
        raise DomainError(f"unknown employee id {player_id!r}")

    @property
    def employee_ids(self) -> tuple:
        return tuple(p.player_id for p in self.positions)


@dataclass(frozen=True)
class Action:
    """One employee's quarter action; fractions in [0, 1], effort >= 0."""

    exercise_fraction: float = 0.0
    hedge_fraction: float = 0.0
    effort_level: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.exercise_fraction <= 1.0:
            raise DomainError("exercise_fraction must lie in [0, 1]")
        if not 0.0 <= self.hedge_fraction <= 1.0:
            raise DomainError("hedge_fraction must lie in [0, 1]")
        if self.effort_level is not None and not self.effort_level >= 0:
            raise DomainError("effort_level must be >= 0")


@dataclass(frozen=True)
class PriceModel:
    kind: str = "deterministic-drift"
    drift: float = 0.0
    vol: float = 0.0
    dilution_sensitivity: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("deterministic-drift", "seeded-lognormal"):
            raise DomainError(f"unknown price model kind {self.kind!r}")
        if self.vol < 0:
            raise DomainError("vol must be >= 0")
        if self.dilution_sensitivity > 0:
            raise DomainError("dilution_sensitivity must be <= 0")
        if self.kind == "deterministic-drift" and self.drift <= -1:
            raise DomainError("deterministic drift must exceed -1 to keep prices positive")


@dataclass(frozen=True)
class QuarterRules:
    """Knobs shared by every quarter game.

    ``exercise_cap`` is the firm's per-quarter restriction on exercise (as a
    fraction of available units); a firm player chooses its cap from
    ``[0, exercise_cap]``. Hedging maps linearly onto the employee-view
    ``lam``: ``1 + hedge * (lam_max - 1)``.
    """

    dilution_sensitivity: float = 0.0
    hedge_levels: tuple = (0.0,)
    effort_levels: Optional[tuple] = None
    lam_max: float = 2.0
    exercise_cap: float = 1.0
    cell_cap: int = 250_000

    def __post_init__(self):
        if self.dilution_sensitivity > 0:
            raise DomainError("dilution_sensitivity must be <= 0")
        if not 0.0 <= self.lam_max <= 2.0:
            raise DomainError("lam_max must lie in [0, 2]")
        if not 0.0 <= self.exercise_cap <= 1.0:
            raise DomainError("exercise_cap must lie in [0, 1]")
        if not self.hedge_levels or any(not 0.0 <= h <= 1.0 for h in self.hedge_levels):
            raise DomainError("hedge_levels must be non-empty fractions in [0, 1]")
        object.__setattr__(self, "hedge_levels", tuple(float(h) for h in self.hedge_levels))
        if self.effort_levels is not None:
            if not self.effort_levels or any(e < 0 for e in self.effort_levels):
                raise DomainError("effort_levels must be non-empty and >= 0")
            object.__setattr__(self, "effort_levels", tuple(float(e) for e in self.effort_levels))


def _split_mods(mods):
    if isinstance(mods, ModifierSet):
        return mods, mods
    firm, emp = mods
    return firm, emp


# -- dilution -----------------------------------------------------------------

def _exercised_units(state: QuarterState, actions: Mapping[str, Action], cap: float) -> dict:
    units = {}
    for pos in state.positions:
        act = actions.get(pos.player_id, Action())
        units[pos.player_id] = min(act.exercise_fraction, cap) * pos.available
    return units


def dilution_loss(state: QuarterState, actions: Mapping[str, Action], for_player: str,
                  exercise_cap: float = 1.0) -> float:
    """Value lost by ``for_player`` to this quarter's exercise by others.

    For an employee: shares issued to others over post-exercise shares
    outstanding, times the player's pre-exercise stock value. For
    ``"firm"``: all newly issued shares over post-exercise shares, times the
    pre-exercise market value of the existing shares.
    """
    if state.shares_outstanding <= 0:
        raise DomainError("shares_outstanding must be > 0")
    units = _exercised_units(state, actions, exercise_cap)
    total = math.fsum(units.values())
    post = state.shares_outstanding + total
    if for_player == FIRM:
        return total / post * state.shares_outstanding * state.share_price
    pos = state.position(for_player)
    others = total - units[for_player]
    return others / post * pos.shares_held * state.share_price


# -- one quarter --------------------------------------------------------------

def realized_price(state: QuarterState, new_units: float, sensitivity: float) -> float:
    """Price after the linear dilution impact (per 1% dilution), floored above 0."""
    post = state.shares_outstanding + new_units
    pct = 100.0 * new_units / post
    return state.share_price * max(PRICE_FLOOR, 1.0 + sensitivity * pct)


def quarter_payoffs(state, actions, ledgers, mods, horizon, efforts=None,
                    rules: QuarterRules = QuarterRules(), firm_cap: Optional[float] = None) -> dict:
    """Stage-two values for every employee (and ``"firm"``) at one joint action.

    ``ledgers`` maps employee ids (and optionally ``"firm"``) to base ledgers;
    ``efforts`` maps ids to :class:`EffortPair`. ``firm_cap`` overrides the
    rules' exercise cap when the firm is an active player.
    """
    mods_firm, mods_emp = _split_mods(mods)
    efforts = efforts or {}
    cap = rules.exercise_cap if firm_cap is None else firm_cap
    units = _exercised_units(state, actions, cap)
    total = math.fsum(units.values())
    post = state.shares_outstanding + total
    price_now = realized_price(state, total, rules.dilution_sensitivity)

    out = {}
    effort_used = []
    for pos in state.positions:
        pid = pos.player_id
        act = actions.get(pid, Action())
        base = ledgers[pid]
        lam_e = (total - units[pid]) / post * pos.shares_held * state.share_price
        intrinsic = units[pid] * max(price_now - pos.strike, 0.0)
        led = replace(base, v_e=base.v_e + intrinsic, lam_e=base.lam_e + lam_e,
                      u_e=base.u_e + pos.carry_over)
        base_effort = efforts.get(pid, EffortPair())
        e_a = base_effort.e_a if act.effort_level is None else act.effort_level
        effort_used.append(e_a)
        emp_view = replace(mods_emp, lam=1.0 + act.hedge_fraction * (rules.lam_max - 1.0))
        out[pid] = stage2_value_employee(led, EffortPair(e_a, base_effort.e_r), mods_firm, emp_view, horizon)

    firm_base = ledgers.get(FIRM, CostLedger())
    lam_c = total / post * state.shares_outstanding * state.share_price
    firm_led = replace(firm_base, lam_c=firm_base.lam_c + lam_c, u_c=firm_base.u_c + state.firm_carry_over)
    firm_effort = efforts.get(FIRM, EffortPair())
    out[FIRM] = stage2_value_company(
        firm_led, EffortPair(math.fsum(effort_used) / len(effort_used) if effort_used else firm_effort.e_a, firm_effort.e_r),
        mods_firm)
    return out


def employee_actions(action_grid_res: int, rules: QuarterRules) -> list[Action]:
    """Employee action grid, hold-first: exercise x hedge x effort."""
    if int(action_grid_res) != action_grid_res or action_grid_res < 2:
        raise ConfigurationError("action_grid_res must be an integer >= 2")
    exercise = np.linspace(0.0, 1.0, int(action_grid_res))
    efforts = rules.effort_levels if rules.effort_levels is not None else (None,)
    return [Action(float(x), h, e) for x, h, e in itertools.product(exercise, rules.hedge_levels, efforts)]


def firm_actions(action_grid_res: int, rules: QuarterRules) -> list[float]:
    return [float(c) for c in np.linspace(0.0, rules.exercise_cap, int(action_grid_res))]


def build_quarter_game(state: QuarterState, players: Sequence[str], ledgers: Mapping[str, CostLedger],
                       mods, horizon: HorizonSpec, action_grid_res: int, efforts=None,
                       rules: QuarterRules = QuarterRules()) -> NormalFormGame:
    """Discretize every player's quarter choice and tabulate stage-two values.

    ``players`` lists employee ids and optionally ``"firm"``, in tensor axis
    order; employees not listed hold. Employee actions come from
    :func:`employee_actions`, firm actions are exercise caps.
    """
    players = list(players)
    if len(players) < 2:
        raise DomainError("a quarter game needs at least two players")
    if len(set(players)) != len(players):
        raise DomainError("players must be distinct")
    for pid in players:
        if pid != FIRM:
            state.position(pid)
            if pid not in ledgers:
                raise DomainError(f"no ledger for employee {pid!r}")
    emp_acts = employee_actions(action_grid_res, rules)
    firm_acts = firm_actions(action_grid_res, rules)
    menus = [firm_acts if pid == FIRM else emp_acts for pid in players]
    counts = [len(m) for m in menus]
    if int(np.prod(counts)) > rules.cell_cap:
        raise ConfigurationError(f"quarter game has {int(np.prod(counts))} cells, cap is {rules.cell_cap}")

    full_ledgers = dict(ledgers)
    for pos in state.positions:
        full_ledgers.setdefault(pos.player_id, CostLedger())
    payoffs = np.zeros((len(players), *counts))
    for joint in itertools.product(*[range(c) for c in counts]):
        actions = {}
        cap = None
        for pid, menu, i in zip(players, menus, joint):
            if pid == FIRM:
                cap = menu[i]
            else:
                actions[pid] = menu[i]
        values = quarter_payoffs(state, actions, full_ledgers, mods, horizon, efforts, rules, firm_cap=cap)
        for k, pid in enumerate(players):
            payoffs[(k, *joint)] = values[pid]
    labels = tuple(tuple(m) for m in menus)
    return NormalFormGame(payoffs, action_labels=labels)


# -- coalitions ---------------------------------------------------------------

def exercise_coalition_value(state: QuarterState, coalition, ledgers, mods, horizon,
                             efforts=None, rules: QuarterRules = QuarterRules()) -> float:
    """Summed stage-two value of ``coalition`` when exactly its members
    exercise everything available and all other employees hold."""
    members = set(coalition)
    if not members:
        return 0.0
    for pid in members:
        state.position(pid)
    full_ledgers = dict(ledgers)
    for pos in state.positions:
        full_ledgers.setdefault(pos.player_id, CostLedger())
    actions = {pid: Action(1.0 if pid in members else 0.0) for pid in state.employee_ids}
    values = quarter_payoffs(state, actions, full_ledgers, mods, horizon, efforts, rules)
    return math.fsum(values[pid] for pid in members)


def exercise_characteristic_function(state: QuarterState, ledgers, mods, horizon, efforts=None,
                                     rules: QuarterRules = QuarterRules()) -> CharacteristicFunction:
    """Characteristic function over the state's employees (player ``i`` is
    ``state.positions[i]``)."""
    ids = state.employee_ids
    return CharacteristicFunction.from_function(
        len(ids),
        lambda s: exercise_coalition_value(state, {ids[i] for i in s}, ledgers, mods, horizon, efforts, rules),
    )


# -- simulation ---------------------------------------------------------------

@dataclass
class QuarterRecord:
    quarter_index: int
    share_price: float
    actions: dict
    firm_cap: Optional[float]
    payoffs: dict
    hold_payoffs: dict
    deviation_payoffs: dict
    pure_nash: list
    new_units: float
    shares_outstanding: float
    vested_fraction: dict

    @property
    def has_pure_nash(self) -> bool:
        return bool(self.pure_nash)


@dataclass
class Trajectory:
    records: list
    states: list = field(default_factory=list)

    @property
    def final_state(self) -> QuarterState:
        return self.states[-1]


def simulate_quarters(initial: QuarterState, n_quarters: int, players: Sequence[str], ledgers, mods,
                      price: PriceModel, policy: str, coupling: float = 0.25, *,
                      horizon: HorizonSpec = HorizonSpec(), efforts=None, action_grid_res: int = 2,
                      vest_per_quarter: float = 0.25, exercise_threshold: float = 1.2,
                      rules: Optional[QuarterRules] = None) -> Trajectory:
    """Play ``n_quarters`` quarter games in sequence.

    Policies: ``"always-hold"`` never exercises; ``"threshold-exercise"``
    exercises fully once the price reaches ``exercise_threshold * strike``;
    ``"myopic-best-response"`` has every player best-respond to the others'
    previous-quarter actions (all-hold before the first quarter). After each
    quarter, vesting advances by ``vest_per_quarter``, exercised units become
    shares, the price moves by the price model and the dilution impact, and
    ``coupling`` times each player's realized value is added to its next
    utility term.
    """
    if int(n_quarters) != n_quarters or n_quarters < 1:
        raise DomainError("n_quarters must be an integer >= 1")
    if policy not in POLICIES:
        raise DomainError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if not 0.0 <= coupling < 1.0:
        raise DomainError("coupling must lie in [0, 1)")
    if not 0.0 <= vest_per_quarter <= 1.0:
        raise DomainError("vest_per_quarter must lie in [0, 1]")
    if rules is None:
        rules = QuarterRules(dilution_sensitivity=price.dilution_sensitivity)
    rng = np.random.default_rng(price.seed)
    players = list(players)
    emp_menu = employee_actions(action_grid_res, rules)
    firm_menu = firm_actions(action_grid_res, rules)
    menus = [firm_menu if pid == FIRM else emp_menu for pid in players]
    full_ledgers = dict(ledgers)
    for pos in initial.positions:
        full_ledgers.setdefault(pos.player_id, CostLedger())

    state = initial
    previous = {pid: HOLD for pid in players}
    records, states = [], [state]
    for _ in range(int(n_quarters)):
        game = build_quarter_game(state, players, full_ledgers, mods, horizon, action_grid_res, efforts, rules)
        hold = (HOLD,) * len(players)
        if policy == "always-hold":
            chosen = hold
        elif policy == "threshold-exercise":
            top = len(np.linspace(0.0, 1.0, action_grid_res)) - 1
            per = len(rules.hedge_levels) * (len(rules.effort_levels) if rules.effort_levels else 1)
            chosen = []
            for pid, menu in zip(players, menus):
                if pid == FIRM:
                    chosen.append(len(menu) - 1)  # firm leaves the cap wide open
                elif state.share_price >= exercise_threshold * state.position(pid).strike:
                    chosen.append(top * per)
                else:
                    chosen.append(0)
            chosen = tuple(chosen)
        else:
            base = tuple(previous[pid] for pid in players)
            chosen = tuple(
                base[k] if base[k] in game.best_responses(k, base) else game.best_responses(k, base)[0]
                for k in range(len(players)))

        hold_pay, dev_pay = {}, {}
        for k, pid in enumerate(players):
            hold_pay[pid] = game.payoff(k, hold)
            unilateral = list(hold)
            unilateral[k] = chosen[k]
            dev_pay[pid] = game.payoff(k, unilateral)
        payoffs = {pid: game.payoff(k, chosen) for k, pid in enumerate(players)}

        actions = {}
        firm_cap = None
        for pid, menu, i in zip(players, menus, chosen):
            if pid == FIRM:
                firm_cap = menu[i]
            else:
                actions[pid] = menu[i]
        cap = rules.exercise_cap if firm_cap is None else firm_cap
        units = _exercised_units(state, actions, cap)
        # values of employees outside ``players`` (they hold) still carry over
        realized = quarter_payoffs(state, actions, full_ledgers, mods, horizon, efforts, rules, firm_cap=cap)
        new_total = math.fsum(units.values())

        z = rng.standard_normal()
        if price.kind == "deterministic-drift":
            growth = 1.0 + price.drift
        else:
            growth = math.exp(price.drift - 0.5 * price.vol ** 2 + price.vol * z)
        next_price = realized_price(state, new_total, rules.dilution_sensitivity) * growth

        records.append(QuarterRecord(
            quarter_index=state.quarter_index,
            share_price=state.share_price,
            actions={pid: actions[pid] for pid in actions},
            firm_cap=firm_cap,
            payoffs=payoffs,
            hold_payoffs=hold_pay,
            deviation_payoffs=dev_pay,
            pure_nash=pure_nash(game),
            new_units=new_total,
            shares_outstanding=state.shares_outstanding + new_total,
            vested_fraction={p.player_id: p.vested_fraction for p in state.positions},
        ))
        positions = []
        for pos in state.positions:
            u = units[pos.player_id]
            positions.append(replace(
                pos,
                exercised=pos.exercised + u,
                shares_held=pos.shares_held + u,
                vested_fraction=min(1.0, pos.vested_fraction + vest_per_quarter),
                carry_over=coupling * realized[pos.player_id],
            ))
        state = QuarterState(
            quarter_index=state.quarter_index + 1,
            share_price=next_price,
            shares_outstanding=state.shares_outstanding + new_total,
            positions=tuple(positions),
            firm_carry_over=coupling * realized[FIRM],
        )
        states.append(state)
        previous = dict(zip(players, chosen))
    return Trajectory(records, states)
