"""Grant negotiation between employees and shareholders.

Each employee picks which of ten contract terms to push for; shareholders
can reverse the sign of the terms they are allowed to contest. The script
negotiates one contract, then a seeded cohort with perturbed cost ledgers,
and lists which cohort members are Pareto-optimal for (firm value,
employee value).
"""

from ebigame.payoff_core import CostLedger, EffortPair, HorizonSpec, ModifierSet
from ebigame.stage_one import (COMPONENT_NAMES, EmployeeNegotiationParams, ShareholderParams, negotiate,
                               pareto_front, run_cohort)

emp = EmployeeNegotiationParams(s=1.0, k=0.5, i_oe=0.2, c_a=0.3, f_e=0.2, b=0.1)
sh = ShareholderParams(s_p=1.0, mgmt_own=0.1, inst_own=0.4, gov_score=0.6, phi=0.2, f_c=0.1,
                       q_weights=(0.3, 0.2, 0.4, 0.1, 0.2, 0.1, 0.5, 0.3, 0.2, 0.1), flippable=(2, 6), max_flips=2)
mods = ModifierSet(omega=0.5)
horizon = HorizonSpec(4.0, 4.0, 1.0, n_steps=21)
ledger = CostLedger(v_c=10.0, v_e=8.0, t_c=1.0, t_e=0.5, m_c=0.5, m_e=0.2, c_c=1.0, c_e=0.3,
                    l_c=0.2, l_e=0.1, lam_c=0.5, lam_e=0.3, u_c=1.0, u_e=0.5)

out = negotiate(2, emp, sh, mods, 20)
print(f"converged={out.converged} in {out.rounds} rounds, pure Nash on the grid: {out.is_pure_nash}")
print("terms pushed:", [n for n, a in zip(COMPONENT_NAMES, out.employee_strategy.a) if a > 0])
print(f"employee payoff {out.employee_payoff:.3f}, shareholder payoff {out.shareholder_payoff:.3f}")

cohort = run_cohort(8, 7, emp, sh, mods, horizon, ledger=ledger, effort=EffortPair(1.0, 1.2),
                    mods_emp=ModifierSet(lam=1.2, omega=0.5), perturbation=(0.5, 0.2, 0.1), grid_res=2)
front = pareto_front([[m.g_c, m.g_e] for m in cohort], ["max", "max"])
print("\n #   v_e     u_e     G_c      G_e     front")
for i, m in enumerate(cohort):
    print(f"{i:2d}  {m.ledger.v_e:6.3f}  {m.ledger.u_e:6.3f}  {m.g_c:7.3f}  {m.g_e:8.3f}  {'*' if i in front else ''}")
