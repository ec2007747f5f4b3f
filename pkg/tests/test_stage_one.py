import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebigame.errors import ConfigurationError, DomainError
from ebigame.payoff_core import CostLedger, EffortPair, HorizonSpec, ModifierSet, stage1_value_company, \
    stage1_value_employee
from ebigame.stage_one import (EmployeeNegotiationParams, ShareholderParams, StrategyComponents, c_transform,
                               employee_payoff, flip_actions, negotiate, pareto_front, q_value, run_cohort,
                               shareholder_payoff)

import oracles

ONES = (1.0,) * 10


def test_q_value_examples():
    assert q_value(StrategyComponents.zeros(), ONES) == 0.0
    e3 = StrategyComponents(tuple(1.0 if i == 2 else 0.0 for i in range(10)))
    assert q_value(e3, ONES) == 1.0
    assert q_value(StrategyComponents((0.5,) * 10), (2.0,) * 10) == 10.0
    with pytest.raises(DomainError):
        q_value(e3, (1.0,) * 9)
    with pytest.raises(DomainError):
        StrategyComponents((1.5,) + (0.0,) * 9)


def test_employee_payoff_examples():
    zero = StrategyComponents.zeros()
    assert employee_payoff(zero, EmployeeNegotiationParams(), ONES) == 0.0
    assert employee_payoff(zero, EmployeeNegotiationParams(s=10, k=4, i_oe=1), ONES) == 7.0
    emp = EmployeeNegotiationParams(s=10, k=4, c_a=2, f_e=1, b=1)
    assert employee_payoff(zero, emp, ONES) == 2.0


def test_c_transform_examples():
    assert c_transform(0.0, ShareholderParams()) == 0.0
    full = ShareholderParams(s_p=1, mgmt_own=0, gov_score=1, inst_own=0)
    assert c_transform(5.0, full) == 5.0
    for x in (-3.0, 0.5, 12.0):
        assert c_transform(x, ShareholderParams(s_p=0)) == 0.0


def test_shareholder_payoff_examples():
    zero = StrategyComponents.zeros()
    assert shareholder_payoff(zero, ShareholderParams(), EmployeeNegotiationParams(), ModifierSet()) == 0.0
    # g = 1, B + C_a = 4, X = F_c = 1
    got = shareholder_payoff(zero, ShareholderParams(f_c=1), EmployeeNegotiationParams(b=3, c_a=1), ModifierSet())
    assert got == 3.0
    # g = 0.5, X = 2
    got = shareholder_payoff(zero, ShareholderParams(s_p=0.5, f_c=2), EmployeeNegotiationParams(b=4), ModifierSet())
    assert got == 1.0


def test_shareholder_params_validation():
    with pytest.raises(DomainError):
        ShareholderParams(s_p=1.5)
    with pytest.raises(DomainError):
        ShareholderParams(mgmt_own=0.7, inst_own=0.5)
    with pytest.raises(DomainError):
        ShareholderParams(flippable=(10,))
    assert flip_actions(ShareholderParams(flippable=(1, 3), max_flips=1)) == [(), (1,), (3,)]


nonneg = st.floats(0, 100)


@given(nonneg, nonneg, nonneg, nonneg, nonneg, nonneg, st.floats(0.01, 10), st.integers(0, 5),
       st.lists(st.sampled_from([0.0, 0.5, 1.0]), min_size=10, max_size=10))
def test_employee_payoff_monotone(s, k, i_oe, c_a, f_e, b, bump, which, a):
    strat = StrategyComponents(tuple(a))
    names = ["s", "k", "i_oe", "c_a", "f_e", "b"]
    base = dict(zip(names, (s, k, i_oe, c_a, f_e, b)))
    up = dict(base)
    up[names[which]] += bump
    lo = employee_payoff(strat, EmployeeNegotiationParams(**base), ONES)
    hi = employee_payoff(strat, EmployeeNegotiationParams(**up), ONES)
    damp = {"c_a": 8, "f_e": 6, "b": 7}
    if names[which] in ("s", "i_oe"):
        assert hi > lo
    elif names[which] == "k" or a[damp[names[which]]] < 1.0:
        assert hi < lo
    else:  # fully damped penalty term does not move the payoff
        assert hi == lo


@given(st.floats(-1e6, 1e6), st.floats(0, 1), st.floats(0, 1), st.floats(0, 0.5), st.floats(0, 0.5))
def test_c_transform_damps_and_keeps_sign(x, s_p, gov, mgmt, inst):
    sh = ShareholderParams(s_p=s_p, gov_score=gov, mgmt_own=mgmt, inst_own=inst)
    y = c_transform(x, sh)
    assert abs(y) <= abs(x)
    assert y == 0 or np.sign(y) == np.sign(x)


def test_flat_landscape_converges_at_once():
    out = negotiate(2, EmployeeNegotiationParams(), ShareholderParams(q_weights=(0.0,) * 10), ModifierSet(), 5)
    assert out.converged and out.rounds == 1 and out.is_pure_nash


def test_dominant_employee_plays_all_ones():
    sh = ShareholderParams(s_p=0.0, q_weights=(0.3, 0.2, 0.4, 0.1, 0.2, 0.1, 0.5, 0.3, 0.2, 0.1))
    out = negotiate(3, EmployeeNegotiationParams(s=1, k=0.5), sh, ModifierSet(), 10)
    assert out.employee_strategy == StrategyComponents.ones()
    assert out.is_pure_nash and out.flips == ()


def _anti_coordination():
    w = [0.0] * 10
    w[4] = w[5] = 1.0
    return ShareholderParams(q_weights=tuple(w), flippable=(4, 5), max_flips=1)


def test_anti_coordination_cycles():
    out = negotiate(2, EmployeeNegotiationParams(), _anti_coordination(), ModifierSet(), 4)
    assert not out.converged and not out.is_pure_nash and out.rounds == 4


def test_negotiate_rejects_bad_config():
    with pytest.raises(ConfigurationError):
        negotiate(1, EmployeeNegotiationParams(), ShareholderParams(), ModifierSet(), 3)
    with pytest.raises(ConfigurationError):
        negotiate(2, EmployeeNegotiationParams(), ShareholderParams(), ModifierSet(), 0)
    with pytest.raises(ConfigurationError):
        negotiate(2, EmployeeNegotiationParams(), ShareholderParams(), ModifierSet(), 3, bounds=[(0.5, 0.2)] * 10)


def _brute_force_is_nash(out, emp, sh, mods):
    """Independent check: no grid deviation for either side improves."""
    g = min(max(sh.s_p * (1 - sh.mgmt_own) * (0.5 + 0.5 * sh.gov_score + 0.5 * sh.inst_own), 0.0), 1.0)
    e = mods.pi * mods.lam * mods.psi

    def emp_pay(a, w):
        q = sum(x * y for x, y in zip(a, w))
        return q + emp.s - emp.k + emp.i_oe - (emp.c_a * (1 - a[8]) + emp.f_e * (1 - a[6]) + emp.b * (1 - a[7]))

    def sh_pay(a, w):
        q = sum(x * y for x, y in zip(a, w))
        return oracles.spow(g * (emp.b + emp.c_a), e) - oracles.spow(g * (q + sh.f_c + sh.phi), e)

    a, w = out.employee_strategy.a, out.q_weights
    now = emp_pay(a, w)
    if any(emp_pay(alt, w) > now + 1e-12 for alt in itertools.product((0.0, 1.0), repeat=10)):
        return False
    now = sh_pay(a, w)
    for size in range(min(sh.max_flips, len(sh.flippable)) + 1):
        for flips in itertools.combinations(sh.flippable, size):
            wk = [-x if i in flips else x for i, x in enumerate(sh.q_weights)]
            if sh_pay(a, wk) > now + 1e-12:
                return False
    return True


def test_pure_nash_flag_matches_brute_force():
    rng = np.random.default_rng(11)
    seen = set()
    for _ in range(25):
        emp = EmployeeNegotiationParams(*rng.uniform(0, 2, 6).round(2))
        flippable = tuple(sorted(rng.choice(10, size=int(rng.integers(1, 4)), replace=False)))
        sh = ShareholderParams(s_p=float(rng.uniform(0, 1)), gov_score=float(rng.uniform(0, 1)),
                               phi=float(rng.uniform(0, 1)), q_weights=tuple(rng.uniform(-1, 1, 10).round(2)),
                               flippable=flippable, max_flips=int(rng.integers(1, 3)))
        mods = ModifierSet(pi=float(rng.uniform(0.5, 1.5)))
        out = negotiate(2, emp, sh, mods, 12)
        assert out.is_pure_nash == (out.converged and _brute_force_is_nash(out, emp, sh, mods))
        seen.add(out.is_pure_nash)
    out = negotiate(2, EmployeeNegotiationParams(), _anti_coordination(), ModifierSet(), 4)
    assert not _brute_force_is_nash(out, EmployeeNegotiationParams(), _anti_coordination(), ModifierSet())
    assert True in seen


def test_swapping_roles_changes_the_outcome():
    emp = EmployeeNegotiationParams(s=1, k=0.5, c_a=0.3, f_e=0.2, b=0.1)
    sh = ShareholderParams(q_weights=(0.3, 0.2, 0.4, 0.1, 0.2, 0.1, 0.5, 0.3, 0.2, 0.1), flippable=(2, 6),
                           max_flips=2)
    plain = negotiate(2, emp, sh, ModifierSet(), 20)
    swapped = negotiate(2, emp, sh, ModifierSet(), 20, swap_roles=True)
    assert plain.converged and swapped.converged
    assert plain.employee_strategy != swapped.employee_strategy


def test_bounds_limit_the_grid():
    sh = ShareholderParams(s_p=0.0)
    out = negotiate(3, EmployeeNegotiationParams(s=1), sh, ModifierSet(), 5, bounds=[(0.0, 0.4)] * 10)
    assert max(out.employee_strategy.a) == pytest.approx(0.4)


COHORT = dict(emp_base=EmployeeNegotiationParams(s=1, k=0.5), sh=ShareholderParams(s_p=0.0),
              mods=ModifierSet(), horizon=HorizonSpec())


def test_cohort_of_one_matches_single_negotiation():
    led, eff = CostLedger(u_c=2, u_e=3), EffortPair(e_r=1)
    [m] = run_cohort(1, 5, ledger=led, effort=eff, **COHORT)
    assert m.outcome == negotiate(2, COHORT["emp_base"], COHORT["sh"], COHORT["mods"], 20)
    assert m.g_c == stage1_value_company(led, eff, ModifierSet())
    assert m.g_e == stage1_value_employee(led, eff, ModifierSet(), ModifierSet(), HorizonSpec())


def test_cohort_is_reproducible_and_heterogeneous():
    led = CostLedger(u_c=1, u_e=5, v_e=2, t_e=0.5)
    a = run_cohort(3, 42, ledger=led, perturbation=(0.0, 1.0, 0.0), **COHORT)
    b = run_cohort(3, 42, ledger=led, perturbation=(0.0, 1.0, 0.0), **COHORT)
    assert [(m.g_c, m.g_e, m.ledger) for m in a] == [(m.g_c, m.g_e, m.ledger) for m in b]
    assert len({m.g_e for m in a}) == 3
    assert len({m.g_c for m in a}) == 1
    c = run_cohort(3, 43, ledger=led, perturbation=(0.0, 1.0, 0.0), **COHORT)
    assert [m.g_e for m in c] != [m.g_e for m in a]


def test_information_leak_raises_later_collusion_value():
    out = run_cohort(3, 1, information_leak=0.5, **COHORT)
    assert out[0].emp.i_oe == 0.0
    assert out[1].emp.i_oe > 0.0
    off = run_cohort(3, 1, **COHORT)
    assert all(m.emp.i_oe == 0.0 for m in off)


def test_pareto_front():
    pts = [(1, 1), (2, 0), (0, 2), (0.5, 0.5), (2, 0)]
    assert pareto_front(pts, ["max", "max"]) == [0, 1, 2, 4]
    assert pareto_front(pts, ["min", "min"]) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        pareto_front(pts, ["max", "up"])
