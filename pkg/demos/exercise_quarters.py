"""Two employees decide each quarter whether to exercise options.

Exercising adds shares, the price reacts to the added supply, and each
employee's exercise dilutes the other's holdings. The script plays four
quarters under each policy and prints what happened to the price, who
exercised, and whether the quarter's exercise game had a pure equilibrium.
"""

from ebigame.coalition import core_is_empty, is_superadditive
from ebigame.payoff_core import CostLedger, HorizonSpec, ModifierSet
from ebigame.stage_two import (EmployeePosition, PriceModel, QuarterRules, QuarterState,
                               exercise_characteristic_function, simulate_quarters)

positions = tuple(EmployeePosition(pid, 100.0, 8.0, vested_fraction=0.5, shares_held=50.0) for pid in "AB")
start = QuarterState(0, 10.0, 1000.0, positions)
ledgers = {pid: CostLedger(u_e=1.0) for pid in "AB"}
mods = ModifierSet()
horizon = HorizonSpec(1.0, 1.0, 1.0, n_steps=2)
price = PriceModel(drift=0.02, dilution_sensitivity=-0.02)
rules = QuarterRules(dilution_sensitivity=-0.02, hedge_levels=(0.0, 0.5))

for policy in ("always-hold", "threshold-exercise", "myopic-best-response"):
    traj = simulate_quarters(start, 4, ["A", "B"], ledgers, mods, price, policy, 0.25,
                             horizon=horizon, rules=rules)
    print(f"\n{policy}")
    print(" q  price    new units  pure NE  payoff A   payoff B")
    for rec in traj.records:
        print(f"{rec.quarter_index:2d}  {rec.share_price:7.3f}  {rec.new_units:9.1f}  "
              f"{'yes' if rec.pure_nash else 'no ':>7}  {rec.payoffs['A']:9.3f}  {rec.payoffs['B']:9.3f}")

cf = exercise_characteristic_function(start, ledgers, mods, horizon, rules=rules)
ok, pair = is_superadditive(cf)
verdict = core_is_empty(cf)
print("\ncoalition values in quarter 0:", [round(float(v), 3) for v in cf.v])
print("super-additive:", ok, "" if ok else f"(counterexample {sorted(pair[0])} + {sorted(pair[1])})")
print("core empty:", verdict.empty, f"(exact={verdict.exact})")
