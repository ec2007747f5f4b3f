"""Grant negotiation between one employee and the firm's shareholders.

The employee chooses ten contract-term intensities ``a`` on a grid. The
shareholders move indirectly: they may flip the sign of a bounded number of
the weights that aggregate ``a`` into the strategy value ``Q``. Alternating
best responses either settle on a contract (the "apparent" equilibrium) or
cycle. Each Max/Min objective pair is scored as Max-branch minus
Min-branch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .payoff_core import (
    CostLedger,
    EffortPair,
    HorizonSpec,
    ModifierSet,
    signed_pow,
    stage1_value_company,
    stage1_value_employee,
)

N_COMPONENTS = 10
COMPONENT_NAMES = (
    "strike_adjustment",
    "vesting_shortening",
    "anti_dilution",
    "registration_rights",
    "tax_minimization",
    "reporting_amendment",
    "detection_minimization",
    "benchmark_minimization",
    "required_effort_change",
    "disclosure_basis_change",
)
# zero-based positions of the components that damp the Min branch
A_DETECTION, A_BENCHMARK, A_EFFORT = 6, 7, 8

EXHAUSTIVE_CAP = 1_100_000


def _vector10(values, name) -> np.ndarray:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.shape != (N_COMPONENTS,):
        raise DomainError(f"{name} must have exactly {N_COMPONENTS} entries, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class StrategyComponents:
    """Ten component intensities in [0, 1], ordered as ``COMPONENT_NAMES``."""

    a: tuple

    def __post_init__(self):
        arr = _vector10(self.a, "strategy")
        if np.any(arr < 0) or np.any(arr > 1):
            raise DomainError("strategy components must lie in [0, 1]")
        object.__setattr__(self, "a", tuple(float(x) for x in arr))

    @classmethod
    def zeros(cls) -> "StrategyComponents":
        return cls((0.0,) * N_COMPONENTS)

    @classmethod
    def ones(cls) -> "StrategyComponents":
        return cls((1.0,) * N_COMPONENTS)

    def as_array(self) -> np.ndarray:
        return np.array(self.a)


def _nonneg_fields(obj, names):
    for name in names:
        value = float(getattr(obj, name))
        if not math.isfinite(value) or value < 0:
            raise DomainError(f"{type(obj).__name__}.{name} must be finite and >= 0, got {value}")
        object.__setattr__(obj, name, value)


@dataclass(frozen=True)
class EmployeeNegotiationParams:
    """Share price ``s``, strike ``k``, collusion information value ``i_oe``,
    contributed effort ``c_a``, penalty exposure ``f_e`` and benchmark ``b``."""

    s: float = 0.0
    k: float = 0.0
    i_oe: float = 0.0
    c_a: float = 0.0
    f_e: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        _nonneg_fields(self, ("s", "k", "i_oe", "c_a", "f_e", "b"))


@dataclass(frozen=True)
class ShareholderParams:
    """Shareholder influence over the negotiation.

    ``flippable`` lists the weight positions the shareholders may re-sign and
    ``max_flips`` bounds how many they flip at once; together they are the
    shareholders' indirect action space.
    """

    s_p: float = 1.0
    mgmt_own: float = 0.0
    inst_own: float = 0.0
    gov_score: float = 1.0
    phi: float = 0.0
    f_c: float = 0.0
    q_weights: tuple = (1.0,) * N_COMPONENTS
    flippable: tuple = tuple(range(N_COMPONENTS))
    max_flips: int = N_COMPONENTS

    def __post_init__(self):
        for name in ("s_p", "mgmt_own", "inst_own", "gov_score"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"ShareholderParams.{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)
        if self.mgmt_own + self.inst_own > 1.0:
            raise DomainError("mgmt_own + inst_own must not exceed 1")
        _nonneg_fields(self, ("phi", "f_c"))
        object.__setattr__(self, "q_weights", tuple(float(w) for w in _vector10(self.q_weights, "q_weights")))
        flippable = tuple(sorted({int(i) for i in self.flippable}))
        if any(not 0 <= i < N_COMPONENTS for i in flippable):
            raise DomainError("flippable positions must lie in 0..9")
        object.__setattr__(self, "flippable", flippable)
        if int(self.max_flips) != self.max_flips or self.max_flips < 0:
            raise DomainError("max_flips must be a non-negative integer")
        object.__setattr__(self, "max_flips", int(self.max_flips))


@dataclass
class ContractOutcome:
    """Result of one negotiation.

    ``flips`` is the shareholders' final action (weight positions re-signed).
    """

    employee_strategy: StrategyComponents
    employee_payoff: float
    shareholder_payoff: float
    is_pure_nash: bool
    rounds: int
    converged: bool
    flips: tuple = ()
    q_weights: tuple = field(default_factory=tuple)


# -- payoffs ------------------------------------------------------------------

def q_value(strategy: StrategyComponents, q_weights: Sequence[float]) -> float:
    """Additive strategy value ``sum_i w_i * a_i``."""
    w = _vector10(q_weights, "q_weights")
    return float(np.dot(w, strategy.as_array()))


def _min_branch(a: np.ndarray, emp: EmployeeNegotiationParams) -> np.ndarray:
    return (emp.c_a * (1.0 - a[..., A_EFFORT])
            + emp.f_e * (1.0 - a[..., A_DETECTION])
            + emp.b * (1.0 - a[..., A_BENCHMARK]))


def _employee_payoffs(a: np.ndarray, emp: EmployeeNegotiationParams, w: np.ndarray) -> np.ndarray:
    q = a @ w
    return (q + emp.s - emp.k + emp.i_oe) - _min_branch(a, emp)


def employee_payoff(strategy: StrategyComponents, params: EmployeeNegotiationParams,
                    q_weights: Sequence[float]) -> float:
    """``[Q + S - K + I_oe] - [C_a(1 - a9) + F_e(1 - a7) + B(1 - a8)]``."""
    a = strategy.as_array()
    return float(_employee_payoffs(a, params, _vector10(q_weights, "q_weights")))


def c_gain(sh: ShareholderParams) -> float:
    """Damping factor of the shareholders' transformation, clamped to [0, 1]."""
    g = sh.s_p * (1.0 - sh.mgmt_own) * (0.5 + 0.5 * sh.gov_score + 0.5 * sh.inst_own)
    return min(max(g, 0.0), 1.0)


def c_transform(x: float, sh: ShareholderParams) -> float:
    """Linear, sign-preserving damping ``g * x``."""
    return c_gain(sh) * float(x)


def _shareholder_payoffs(q: np.ndarray, sh: ShareholderParams, emp: EmployeeNegotiationParams,
                         exponent: float) -> np.ndarray:
    g = c_gain(sh)
    gain = signed_pow(g * (emp.b + emp.c_a), exponent)
    x = g * (np.asarray(q, dtype=float) + sh.f_c + sh.phi)
    return gain - np.sign(x) * np.abs(x) ** exponent


def shareholder_payoff(strategy: StrategyComponents, sh: ShareholderParams,
                       emp: EmployeeNegotiationParams, mods: ModifierSet,
                       q_weights: Optional[Sequence[float]] = None) -> float:
    """``C(B + C_a)^e - C(Q + F_c + Phi)^e`` with ``e = pi * lam * psi``.

    ``q_weights`` defaults to the shareholders' own base weights.
    """
    w = sh.q_weights if q_weights is None else q_weights
    q = q_value(strategy, w)
    e = mods.pi * mods.lam * mods.psi
    g = c_gain(sh)
    return signed_pow(g * (emp.b + emp.c_a), e) - signed_pow(g * (q + sh.f_c + sh.phi), e)


# -- negotiation --------------------------------------------------------------

def flip_actions(sh: ShareholderParams) -> list[tuple]:
    """Shareholder action set: subsets of ``flippable`` of size <= ``max_flips``,
    smallest first, the empty flip at index 0."""
    out = []
    for size in range(0, min(sh.max_flips, len(sh.flippable)) + 1):
        out.extend(itertools.combinations(sh.flippable, size))
    return out


def _weights_for(sh: ShareholderParams, flips: tuple) -> np.ndarray:
    w = np.array(sh.q_weights)
    for i in flips:
        w[i] = -w[i]
    return w


def _grid_values(grid_res: int, bounds) -> list[np.ndarray]:
    if int(grid_res) != grid_res or grid_res < 2:
        raise ConfigurationError(f"grid_res must be an integer >= 2, got {grid_res}")
    if bounds is None:
        bounds = [(0.0, 1.0)] * N_COMPONENTS
    if len(bounds) != N_COMPONENTS:
        raise ConfigurationError("bounds needs one (lo, hi) pair per component")
    levels = []
    for lo, hi in bounds:
        if not 0.0 <= lo <= hi <= 1.0:
            raise ConfigurationError(f"component bounds must satisfy 0 <= lo <= hi <= 1, got ({lo}, {hi})")
        levels.append(np.linspace(lo, hi, int(grid_res)))
    return levels


class _Negotiation:
    """Payoff evaluation for both sides on a fixed grid."""

    def __init__(self, levels, emp, sh, mods, swap_roles):
        self.levels = levels
        self.emp = emp
        self.sh = sh
        self.exponent = mods.pi * mods.lam * mods.psi
        self.flips = flip_actions(sh)
        self.weights = np.array([_weights_for(sh, f) for f in self.flips])
        self.swap = swap_roles

    def emp_true(self, a, w):
        return _employee_payoffs(a, self.emp, w)

    def sh_true(self, a, w):
        return _shareholder_payoffs(a @ w, self.sh, self.emp, self.exponent)

    # under swapped roles each side maximizes the other's objective
    def emp_objective(self, a, w):
        return self.sh_true(a, w) if self.swap else self.emp_true(a, w)

    def sh_objective(self, a, w):
        return self.emp_true(a, w) if self.swap else self.sh_true(a, w)

    def strategy(self, idx) -> np.ndarray:
        return np.array([self.levels[i][j] for i, j in enumerate(idx)])

    def all_strategies(self, chunk=65_536):
        grids = [range(len(lv)) for lv in self.levels]
        it = itertools.product(*grids)
        while True:
            block = list(itertools.islice(it, chunk))
            if not block:
                return
            idx = np.array(block)
            yield idx, np.stack([self.levels[i][idx[:, i]] for i in range(N_COMPONENTS)], axis=1)

    def n_strategies(self) -> int:
        return int(np.prod([len(lv) for lv in self.levels]))

    def employee_best(self, idx, flip):
        """Best grid strategy against ``flip``; keeps ``idx`` if it is already best."""
        w = self.weights[flip]
        current = float(self.emp_objective(self.strategy(idx), w))
        best_val, best_idx = -math.inf, None
        if self.n_strategies() <= EXHAUSTIVE_CAP:
            for block_idx, block in self.all_strategies():
                vals = self.emp_objective(block, w)
                j = int(np.argmax(vals))
                if vals[j] > best_val:
                    best_val, best_idx = float(vals[j]), tuple(int(v) for v in block_idx[j])
        else:
            best_idx, best_val = self._separable_best(w)
        if best_val > current:
            return best_idx, best_val, True
        return tuple(idx), current, False

    def _separable_best(self, w):
        # the employee payoff is affine and separable in a for fixed w, so the
        # product-grid optimum is the per-coordinate optimum; used above the cap
        if self.swap:
            raise ConfigurationError("grid too large for exhaustive search with swapped roles")
        base = np.array([lv[0] for lv in self.levels])
        idx = []
        for i, lv in enumerate(self.levels):
            trial = np.repeat(base[None, :], len(lv), axis=0)
            trial[:, i] = lv
            vals = self.emp_objective(trial, w)
            idx.append(int(np.argmax(vals)))
        best_idx = tuple(idx)
        return best_idx, float(self.emp_objective(self.strategy(best_idx), w))

    def shareholder_best(self, idx, flip):
        a = self.strategy(idx)
        vals = np.array([float(self.sh_objective(a, w)) for w in self.weights])
        j = int(np.argmax(vals))
        if vals[j] > vals[flip]:
            return j, True
        return flip, False

    def is_pure_nash(self, idx, flip) -> bool:
        w = self.weights[flip]
        a = self.strategy(idx)
        e_now = float(self.emp_objective(a, w))
        if self.n_strategies() <= EXHAUSTIVE_CAP:
            for _, block in self.all_strategies():
                if np.any(self.emp_objective(block, w) > e_now):
                    return False
        else:
            _, best = self._separable_best(w)
            if best > e_now:
                return False
        s_now = float(self.sh_objective(a, w))
        return not any(float(self.sh_objective(a, wk)) > s_now for wk in self.weights)


def negotiate(grid_res: int, emp: EmployeeNegotiationParams, sh: ShareholderParams,
              mods: ModifierSet, max_rounds: int, bounds=None,
              swap_roles: bool = False) -> ContractOutcome:
    """Alternate employee and shareholder best responses until a full round
    changes nothing or ``max_rounds`` is exhausted.

    Play starts from every component at its lower bound and no flips. A side
    moves only on a strict improvement, and then to its lowest-index best
    response. ``bounds`` (ten ``(lo, hi)`` pairs) stand in for board and
    adviser limits on the terms. ``swap_roles`` lets each side optimize the
    other's objective, which probes the asymmetry of the solution.
    Payoffs in the outcome are always the true (unswapped) ones.
    """
    if int(max_rounds) != max_rounds or max_rounds < 1:
        raise ConfigurationError("max_rounds must be an integer >= 1")
    levels = _grid_values(grid_res, bounds)
    neg = _Negotiation(levels, emp, sh, mods, swap_roles)
    idx = (0,) * N_COMPONENTS
    flip = 0
    converged = False
    rounds = 0
    for rounds in range(1, int(max_rounds) + 1):
        idx, _, moved_e = neg.employee_best(idx, flip)
        flip, moved_s = neg.shareholder_best(idx, flip)
        if not (moved_e or moved_s):
            converged = True
            break
    a = neg.strategy(idx)
    w = neg.weights[flip]
    return ContractOutcome(
        employee_strategy=StrategyComponents(tuple(a)),
        employee_payoff=float(neg.emp_true(a, w)),
        shareholder_payoff=float(neg.sh_true(a, w)),
        is_pure_nash=neg.is_pure_nash(idx, flip) if converged else False,
        rounds=rounds,
        converged=converged,
        flips=neg.flips[flip],
        q_weights=tuple(float(x) for x in w),
    )


# -- cohort -------------------------------------------------------------------

@dataclass
class CohortMember:
    outcome: ContractOutcome
    g_c: float
    g_e: float
    ledger: CostLedger
    emp: EmployeeNegotiationParams


def run_cohort(
    n_employees: int,
    ledger_sampler_seed: int,
    emp_base: EmployeeNegotiationParams,
    sh: ShareholderParams,
    mods: ModifierSet,
    horizon: HorizonSpec,
    *,
    ledger: CostLedger = CostLedger(),
    effort: EffortPair = EffortPair(),
    mods_emp: Optional[ModifierSet] = None,
    perturbation: Sequence[float] = (0.0, 0.0, 0.0),
    grid_res: int = 2,
    max_rounds: int = 20,
    bounds=None,
    information_leak: float = 0.0,
    share_view: str = "firm",
) -> list[CohortMember]:
    """Negotiate with ``n_employees`` employees one after another.

    Each employee gets an independent child generator spawned from
    ``ledger_sampler_seed``; ``perturbation = (sd_v, sd_u, sd_t)`` sets the
    spread of additive normal shocks to ``v_e`` and ``u_e`` and of a
    multiplicative lognormal shock to ``t_e`` (which keeps it non-negative).
    With ``information_leak > 0`` later employees see their collusion value
    ``i_oe`` raised by that fraction of the mean positive payoff of earlier
    contracts; off by default.
    """
    if int(n_employees) != n_employees or n_employees < 1:
        raise DomainError("n_employees must be an integer >= 1")
    sd_v, sd_u, sd_t = (float(x) for x in perturbation)
    if min(sd_v, sd_u, sd_t) < 0:
        raise DomainError("perturbation scales must be >= 0")
    mods_emp = mods if mods_emp is None else mods_emp
    children = np.random.SeedSequence(int(ledger_sampler_seed)).spawn(int(n_employees))
    members = []
    earlier = []
    for child in children:
        rng = np.random.default_rng(child)
        z = rng.standard_normal(3)
        own = replace(
            ledger,
            v_e=ledger.v_e + sd_v * z[0],
            u_e=ledger.u_e + sd_u * z[1],
            t_e=ledger.t_e * math.exp(sd_t * z[2]),
        )
        emp = emp_base
        if information_leak > 0 and earlier:
            emp = replace(emp_base, i_oe=emp_base.i_oe + information_leak * max(0.0, float(np.mean(earlier))))
        outcome = negotiate(grid_res, emp, sh, mods, max_rounds, bounds=bounds)
        earlier.append(outcome.employee_payoff)
        members.append(CohortMember(
            outcome=outcome,
            g_c=stage1_value_company(own, effort, mods),
            g_e=stage1_value_employee(own, effort, mods, mods_emp, horizon, share_view=share_view),
            ledger=own,
            emp=emp,
        ))
    return members


# -- Pareto filter for the company's objective vectors --------------------------

def pareto_front(points: Sequence[Sequence[float]], senses: Sequence[str]) -> list[int]:
    """Indices of the non-dominated points, in input order.

    ``senses`` gives ``"min"`` or ``"max"`` per coordinate.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != len(senses):
        raise ValueError("points must be a 2-D array with one column per sense")
    sign = np.array([1.0 if s == "max" else -1.0 if s == "min" else np.nan for s in senses])
    if np.any(np.isnan(sign)):
        raise ValueError("senses must be 'min' or 'max'")
    g = pts * sign  # larger is better everywhere
    keep = []
    for i in range(len(g)):
        dominated = np.any(np.all(g >= g[i], axis=1) & np.any(g > g[i], axis=1))
        if not dominated:
            keep.append(i)
    return keep
