"""The eight acceptance criteria, one test each, with their runtime budgets."""

import itertools
import json
import time
from fractions import Fraction

import numpy as np
import pytest

from ebigame.cli import demo_scenario_text
from ebigame.coalition import (CharacteristicFunction, core_is_empty, in_core, members_of,
                               sample_core_point, shapley_value, verify_certificate)
from ebigame.equilibrium import (NormalFormGame, dominant_strategy_report, joint_improvability, pure_nash,
                                 support_enumeration_2p)
from ebigame.payoff_core import (CostLedger, EffortPair, HorizonSpec, ModifierSet, company_objective_vector,
                                 stage1_value_company, stage1_value_employee, stage2_value_company,
                                 stage2_value_employee, trapezoid_1d, trapezoid_2d)
from ebigame.prodfn import ProductionSpec, audit, evaluate, marginals, sample_box
from ebigame.runner import emit, run
from ebigame.scenario import loads_scenario

import oracles

FIELDS = ("v_c", "v_e", "t_c", "t_e", "m_c", "m_e", "c_c", "c_e", "l_c", "l_e", "lam_c", "lam_e", "u_c", "u_e")
COSTS = ("t_c", "t_e", "m_c", "m_e", "c_c", "c_e", "l_c", "l_e", "lam_c", "lam_e")


def _close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def _random_fixture(rng):
    led = {f: float(rng.uniform(0, 5)) if f in COSTS else float(rng.uniform(-5, 12)) for f in FIELDS}
    mods = dict(pi=rng.uniform(0, 2), psi=rng.uniform(0, 2), lam=rng.uniform(0, 2), omega=rng.uniform(0.05, 1))
    mods_e = dict(pi=rng.uniform(0, 2), psi=rng.uniform(0, 2), lam=rng.uniform(0, 2), omega=rng.uniform(0.05, 1))
    eff = dict(e_a=rng.uniform(0, 3), e_r=rng.uniform(0, 3))
    hor = dict(t_c_limit=rng.uniform(0.5, 5), t_e_limit=rng.uniform(0.5, 5), h_limit=rng.uniform(0.25, 2),
               n_steps=int(rng.integers(2, 50)))
    return led, mods, mods_e, eff, hor


def test_criterion_1_payoff_formula_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    for _ in range(200):
        led, m, me, eff, hor = _random_fixture(rng)
        L, M, ME = CostLedger(**led), ModifierSet(**m), ModifierSet(**me)
        E, H = EffortPair(**eff), HorizonSpec(**hor)
        assert _close(stage1_value_company(L, E, M),
                      oracles.company_value_stage1(led, eff["e_r"], m["pi"], m["lam"]), 1e-12)
        assert _close(stage2_value_company(L, E, M),
                      oracles.company_value_stage2(led, eff["e_a"], m["pi"], m["psi"], m["lam"]), 1e-12)
        for view, share in (("firm", m), ("employee", me)):
            want1 = oracles.employee_value_stage1(led, eff["e_a"], share["pi"] * share["omega"],
                                                  me["pi"] * me["lam"], hor["t_c_limit"], hor["t_e_limit"])
            got1 = stage1_value_employee(L, E, M, ME, H, share_view=view)
            assert _close(got1, want1, 1e-12)
            want2 = oracles.employee_value_stage2(
                led, eff["e_a"], share["pi"] * share["psi"] * share["lam"] * share["omega"],
                me["pi"] * me["psi"] * me["lam"], hor["h_limit"], hor["t_c_limit"], hor["t_e_limit"])
            got2 = stage2_value_employee(L, E, M, ME, H, share_view=view)
            assert _close(got2, want2, 1e-12)

        # unit modifiers: stage values are the raw brackets, bit for bit
        one = ModifierSet()
        firm_b = led["u_c"] + eff["e_a"] + led["v_c"] - led["t_c"] - led["lam_c"] - led["m_c"] - led["l_c"] - led["c_c"]
        own_b = led["u_e"] + led["v_e"] - eff["e_a"] - led["t_e"] - led["lam_e"] - led["m_e"] - led["l_e"] - led["c_e"]
        comp_r = led["u_c"] + eff["e_r"] - led["v_c"] - led["c_c"] - led["lam_c"] - led["m_c"] - led["l_c"] - led["t_c"]
        comp_a = led["u_c"] + eff["e_a"] - led["v_c"] - led["c_c"] - led["lam_c"] - led["m_c"] - led["l_c"] - led["t_c"]
        assert stage1_value_company(L, E, one) == comp_r
        assert stage2_value_company(L, E, one) == comp_a
        unit_h = HorizonSpec(1.0, 1.0, 1.0, hor["n_steps"])
        assert stage1_value_employee(L, E, one, one, unit_h) == max(max(firm_b, 0.0), own_b)
        assert stage2_value_employee(L, E, one, one, unit_h) == max(max(firm_b, 0.0), own_b)
    elapsed = time.perf_counter() - start
    print(f"criterion 1: 200 fixtures in {elapsed:.3f} s")
    assert elapsed < 1.0


def test_criterion_2_quadrature_oracle():
    start = time.perf_counter()
    for n in (2, 10, 100):
        for limit in (0.5, 1.0, 3.0, 7.25):
            assert abs(trapezoid_1d(lambda t: 2.5, limit, n) - 2.5 * limit) < 1e-9
            assert abs(trapezoid_1d(lambda t: 1.5 - 0.75 * t, limit, n) - (1.5 * limit - 0.375 * limit ** 2)) < 1e-9
            h = 1.75
            assert abs(trapezoid_2d(lambda a, b: -3.0, h, limit, n) + 3.0 * h * limit) < 1e-9
            want = 2.0 * h * limit + 0.5 * 0.5 * h ** 2 * limit - 1.5 * h * 0.5 * limit ** 2
            assert abs(trapezoid_2d(lambda a, b: 2.0 + 0.5 * a - 1.5 * b, h, limit, n) - want) < 1e-9

        # through the stage values with a time profile, exponent 1
        horizon = HorizonSpec(t_c_limit=2.0, t_e_limit=3.0, h_limit=1.5, n_steps=n)
        one = ModifierSet()
        # employee-net bracket u_e + v_e = 2 + 0.5 t, firm-share branch pinned negative
        prof = lambda t: CostLedger(u_e=2.0 + 0.5 * t, v_c=-100.0)
        got = stage1_value_employee(CostLedger(v_c=-100.0), EffortPair(), one, one, horizon, profile=prof)
        assert abs(got - (2.0 * 3.0 + 0.25 * 9.0)) < 1e-9
        prof2 = lambda hh, t: CostLedger(u_e=1.0 + hh + 2.0 * t, v_c=-100.0)
        got2 = stage2_value_employee(CostLedger(v_c=-100.0), EffortPair(), one, one, horizon, profile=prof2)
        assert abs(got2 - (1.5 * 3.0 + 0.5 * 1.5 ** 2 * 3.0 + 1.5 * 3.0 ** 2)) < 1e-9
        cost, _, _ = company_objective_vector(CostLedger(), EffortPair(), one, horizon, stage=1,
                                              profile=lambda t: CostLedger(t_c=1.0 + t))
        assert abs(cost - (2.0 + 2.0)) < 1e-9
    elapsed = time.perf_counter() - start
    print(f"criterion 2: quadrature in {elapsed:.3f} s")
    assert elapsed < 1.0


def _random_game(rng, n):
    vals = [Fraction(0)]
    for m in range(1, 1 << n):
        size = bin(m).count("1")
        vals.append(Fraction(int(rng.integers(0, 4 * size + 1)), int(rng.integers(1, 4))))
    if rng.random() < 0.5:  # push v(N) up so roughly half the games have a core
        vals[-1] += Fraction(int(rng.integers(0, 4 * n)))
    return CharacteristicFunction(n, tuple(vals))


def test_criterion_3_core_certification():
    start = time.perf_counter()
    majority = CharacteristicFunction.from_function(3, lambda s: 1 if len(s) >= 2 else 0)
    verdict = core_is_empty(majority)
    assert verdict.empty and verdict.exact and verify_certificate(majority, verdict)
    assert sum(w * majority.v[m] for m, w in zip(verdict.collection, verdict.weights)) == Fraction(3, 2)

    additive = CharacteristicFunction.from_function(4, lambda s: sum(i + 1 for i in s))
    unanimity = CharacteristicFunction.from_function(3, lambda s: 1 if len(s) == 3 else 0)
    for cf in (additive, unanimity):
        v = core_is_empty(cf)
        assert not v.empty and verify_certificate(cf, v) and in_core(cf, v.imputation)

    rng = np.random.default_rng(303)
    found = nonempty = 0
    for k in range(100):
        cf = _random_game(rng, int(rng.integers(2, 5)))
        v = core_is_empty(cf)
        assert verify_certificate(cf, v)
        nonempty += not v.empty
        point = sample_core_point(cf, n_samples=2000, seed=k)
        if point is not None:
            found += 1
            assert in_core(cf, point)
            assert not v.empty, "sampler found a core point in a game certified empty"
    elapsed = time.perf_counter() - start
    print(f"criterion 3: {nonempty}/100 non-empty, sampler hit {found}, {elapsed:.2f} s")
    assert found > 0
    assert elapsed < 10.0


def _swap(mask, i, j):
    bi, bj = mask >> i & 1, mask >> j & 1
    if bi != bj:
        mask ^= (1 << i) | (1 << j)
    return mask


def test_criterion_4_shapley_oracle():
    start = time.perf_counter()
    glove = CharacteristicFunction.from_mapping(3, {(0, 1): 1, (0, 2): 1, (0, 1, 2): 1})
    assert shapley_value(glove) == (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))

    rng = np.random.default_rng(404)
    for _ in range(100):
        n = int(rng.integers(3, 6))
        dummy = n - 1
        raw = [Fraction(int(rng.integers(-5, 20)), int(rng.integers(1, 5))) for _ in range(1 << n)]
        vals = [Fraction(0)] * (1 << n)
        for m in range(1, 1 << n):
            core = m & ~(1 << dummy)  # the last player adds nothing anywhere
            if core:
                sym = _swap(core, 0, 1)  # players 0 and 1 are interchangeable
                vals[m] = (raw[core] + raw[sym]) / 2
        cf = CharacteristicFunction(n, tuple(vals))
        phi = shapley_value(cf)
        assert sum(phi) == cf.v[cf.grand]
        assert phi[0] == phi[1]
        assert phi[dummy] == 0
        table = {members_of(m): cf.v[m] for m in range(1 << n)}
        assert list(phi) == oracles.shapley_by_permutations(n, table)
    elapsed = time.perf_counter() - start
    print(f"criterion 4: Shapley axioms on 100 games in {elapsed:.2f} s")
    assert elapsed < 5.0


def test_criterion_5_equilibrium_engine():
    start = time.perf_counter()
    pennies = NormalFormGame.from_bimatrix([[1, -1], [-1, 1]], [[-1, 1], [1, -1]])
    assert pure_nash(pennies) == []
    half = (Fraction(1, 2), Fraction(1, 2))
    assert support_enumeration_2p(pennies).equilibria == [(half, half)]

    # actions: 0 = cooperate, 1 = defect; T=5 > R=3 > P=1 > S=0
    pd = NormalFormGame.from_bimatrix([[3, 0], [5, 1]], [[3, 5], [0, 1]])
    assert pure_nash(pd) == [(1, 1)]
    assert dominant_strategy_report(pd) == [1, 1]
    coalition, dev = joint_improvability(pd, (1, 1))
    assert coalition == (0, 1) and dev == (0, 0)
    assert all(pd.payoff(p, dev) > pd.payoff(p, (1, 1)) for p in (0, 1))

    rng = np.random.default_rng(505)
    for _ in range(50):
        m, n = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        a = rng.integers(-9, 10, size=(m, n)).astype(float)
        b = rng.integers(-9, 10, size=(m, n)).astype(float)
        g = NormalFormGame.from_bimatrix(a, b)
        scale = float(rng.choice([0.25, 0.5, 2.0, 8.0]))
        shift = float(rng.choice([-3.5, 0.0, 1.25, 40.0]))
        who = int(rng.integers(0, 2))
        a2, b2 = (a * scale + shift, b) if who == 0 else (a, b * scale + shift)
        h = NormalFormGame.from_bimatrix(a2, b2)
        assert pure_nash(g) == pure_nash(h)
        assert dominant_strategy_report(g) == dominant_strategy_report(h)
        sg, sh = support_enumeration_2p(g), support_enumeration_2p(h)
        assert sg.equilibria == sh.equilibria and sg.degenerate == sh.degenerate
    elapsed = time.perf_counter() - start
    print(f"criterion 5: equilibrium checks in {elapsed:.2f} s")
    assert elapsed < 5.0


def test_criterion_6_stage_two_claims_probe(tmp_path):
    start = time.perf_counter()
    scenario = loads_scenario(demo_scenario_text())
    report = run(scenario)
    files = emit(report, "json-like", tmp_path)
    stage2 = json.loads((tmp_path / "demo.stage2.json").read_text())["summary"]
    first = stage2["quarters"][0]
    assert first["superadditive"] is False
    ce = first["counterexample"]
    assert ce["v_S_union_T"] < ce["v_S"] + ce["v_T"]
    for q in stage2["quarters"]:
        assert isinstance(q["pure_nash_exists"], bool)
        assert q["pure_nash_exists"] == bool(q["pure_nash"])
    coalition = json.loads((tmp_path / "demo.coalition.json").read_text())["summary"]
    assert coalition["source"] == "derive-from-stage2" and coalition["superadditive"] is False
    elapsed = time.perf_counter() - start
    flags = [q["pure_nash_exists"] for q in stage2["quarters"]]
    print(f"criterion 6: counterexample S={ce['S']} T={ce['T']}, pure Nash per quarter {flags}, "
          f"{len(files)} files, {elapsed:.2f} s")
    assert elapsed < 10.0


CD = ProductionSpec("cobb-douglas-incentive", {"alphas": (0.3, 0.3, 0.2)}, 3, ((0, 10),) * 3)
DEMOTIVATION = ProductionSpec("cobb-douglas-incentive",
                              {"alphas": (0.4, 0.3, 0.5), "incentive_coef": -0.5, "incentive_offset": 1.0},
                              3, ((0, 10), (0, 10), (-1, 1)))
VESTING = ProductionSpec("piecewise-vesting", {"alphas": (0.4, 0.3, 0.5), "incentive_offset": 1.0}, 3,
                         ((0, 10), (0, 10), (0, 4)), vesting_threshold=2.0)


def test_criterion_7_production_function_audit():
    start = time.perf_counter()
    tol, step = 1e-6, 1e-4
    rep = audit(CD, 256, tol, step, seed=7)
    assert set(rep.verdicts.values()) == {"holds"}, rep.verdicts

    rep = audit(DEMOTIVATION, 256, tol, step, seed=7)
    assert rep.verdicts["A1"] == "violated" and rep.verdicts["A5"] == "violated"
    w1 = rep.evidence["A1"]
    assert w1["point"][w1["factor"]] < 0
    # re-check at ten times the precision
    assert abs(evaluate(DEMOTIVATION, w1["point"]) - evaluate(DEMOTIVATION, w1["nonneg_point"])) > tol / 10
    w5 = rep.evidence["A5"]
    assert all(h >= l for h, l in zip(w5["x_high"], w5["x_low"]))
    assert evaluate(DEMOTIVATION, w5["x_high"]) < evaluate(DEMOTIVATION, w5["x_low"]) - tol / 10

    rep = audit(VESTING, 256, tol, step, seed=7)
    assert rep.verdicts["A6"] == "violated"
    w6 = rep.evidence["A6"]
    assert w6["x_minus"][-1] < 2.0 < w6["x_plus"][-1]
    mid = np.array(w6["x_minus"]) / 2 + np.array(w6["x_plus"]) / 2
    lo, hi = mid.copy(), mid.copy()
    lo[-1], hi[-1] = 2.0 - step / 10, 2.0 + step / 10
    assert abs(evaluate(VESTING, hi) - evaluate(VESTING, lo)) > tol / 10

    worst = 0.0
    alphas = np.array(CD.params["alphas"])
    for x in sample_box(CD, 256, seed=7, margin=0.1):
        fi, _ = marginals(CD, x, step)
        exact = alphas * evaluate(CD, x) / x
        worst = max(worst, float(np.max(np.abs(fi - exact))))
    assert worst <= max(10 * step ** 2, 1e-6)
    elapsed = time.perf_counter() - start
    print(f"criterion 7: audits done, worst marginal error {worst:.2e}, {elapsed:.2f} s")
    assert elapsed < 10.0


def _emit_all(scenario, out):
    return {p.name: p.read_bytes() for p in emit(run(scenario), "json-like", out)}


def test_criterion_8_end_to_end_determinism(tmp_path):
    start = time.perf_counter()
    scenario = loads_scenario(demo_scenario_text())
    first = _emit_all(scenario, tmp_path / "a")
    second = _emit_all(scenario, tmp_path / "b")
    assert first == second

    other = _emit_all(scenario.with_seed(scenario.seed + 1), tmp_path / "c")
    s1 = json.loads(first["demo.stage1.json"])
    s2 = json.loads(other["demo.stage1.json"])
    assert s1["table"]["rows"] != s2["table"]["rows"]  # sampled cohort moves
    assert s1["summary"]["base"] == s2["summary"]["base"]  # formula-level fixture does not
    assert first["demo.stage2.json"] == other["demo.stage2.json"]
    assert first["demo.coalition.json"] == other["demo.coalition.json"]
    elapsed = time.perf_counter() - start
    print(f"criterion 8: byte-identical re-run, seed sensitivity confined to the cohort, {elapsed:.2f} s")
    assert elapsed < 30.0
