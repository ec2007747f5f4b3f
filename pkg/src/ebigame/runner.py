"""Run a scenario block by block and write report files.

Every block produces a nested ``summary`` and one flat ``table`` (columns
plus rows) meant for plotting. Files are named ``<scenario>.<block>.<ext>``
plus one ``<scenario>.summary.<ext>``; floats are written with 12
significant digits so re-runs give byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .coalition import core_is_empty, is_superadditive, members_of, shapley_value, verify_certificate
from .payoff_core import company_objective_vector, stage1_value_company, stage1_value_employee
from .prodfn import audit
from .scenario import Scenario, scenario_to_dict
from .stage_one import COMPONENT_NAMES, negotiate, pareto_front, run_cohort
from .stage_two import FIRM, exercise_characteristic_function, simulate_quarters

BLOCK_ORDER = ("stage1", "stage2", "coalition", "prodfn")
FORMATS = ("json-like", "csv")


@dataclass
class BlockResult:
    summary: dict
    columns: list
    rows: list


@dataclass
class RunReport:
    scenario: dict
    blocks: dict = field(default_factory=dict)
    wall_time: float = 0.0  # kept out of the files so they stay reproducible
    version: str = __version__


def _coalition_label(members) -> str:
    return "+".join(str(m) for m in sorted(members)) or "{}"


def _exact(x: Fraction) -> str:
    return str(x)


# -- blocks -------------------------------------------------------------------

def _run_stage1(s: Scenario) -> BlockResult:
    b = s.stage1
    mods_emp = b.employee_modifiers or b.modifiers
    base = negotiate(b.grid_res, b.employee, b.shareholders, b.modifiers, b.max_rounds, bounds=b.bounds)
    cost, gap, net = company_objective_vector(b.ledger, b.effort, b.modifiers, b.horizon, stage=1)
    summary = {
        "base": {
            "strategy": dict(zip(COMPONENT_NAMES, base.employee_strategy.a)),
            "employee_payoff": base.employee_payoff,
            "shareholder_payoff": base.shareholder_payoff,
            "is_pure_nash": base.is_pure_nash,
            "converged": base.converged,
            "rounds": base.rounds,
            "flips": list(base.flips),
            "g_c": stage1_value_company(b.ledger, b.effort, b.modifiers),
            "g_e": stage1_value_employee(b.ledger, b.effort, b.modifiers, mods_emp, b.horizon,
                                         share_view=b.share_view),
            "company_objectives": {"cost_integral": cost, "effort_gap": gap, "net_value": net},
        },
    }
    cohort = run_cohort(
        b.cohort_size, s.seed, b.employee, b.shareholders, b.modifiers, b.horizon,
        ledger=b.ledger, effort=b.effort, mods_emp=b.employee_modifiers, perturbation=b.perturbation,
        grid_res=b.grid_res, max_rounds=b.max_rounds, bounds=b.bounds,
        information_leak=b.information_leak, share_view=b.share_view,
    )
    columns = (["employee"] + list(COMPONENT_NAMES)
               + ["employee_payoff", "shareholder_payoff", "is_pure_nash", "converged", "rounds",
                  "g_c", "g_e", "v_e", "u_e", "t_e"])
    rows = []
    for i, m in enumerate(cohort):
        o = m.outcome
        rows.append([i, *o.employee_strategy.a, o.employee_payoff, o.shareholder_payoff, o.is_pure_nash,
                     o.converged, o.rounds, m.g_c, m.g_e, m.ledger.v_e, m.ledger.u_e, m.ledger.t_e])
    front = pareto_front([[m.g_c, m.g_e] for m in cohort], ["max", "max"])
    summary["cohort"] = {
        "size": len(cohort),
        "converged": sum(m.outcome.converged for m in cohort),
        "pure_nash": sum(m.outcome.is_pure_nash for m in cohort),
        "mean_employee_payoff": float(np.mean([m.outcome.employee_payoff for m in cohort])),
        "mean_shareholder_payoff": float(np.mean([m.outcome.shareholder_payoff for m in cohort])),
        "mean_g_c": float(np.mean([m.g_c for m in cohort])),
        "mean_g_e": float(np.mean([m.g_e for m in cohort])),
        "pareto_front": front,
    }
    return BlockResult(summary, columns, rows)


def _superadditivity(cf) -> dict:
    ok, pair = is_superadditive(cf)
    out = {"superadditive": ok}
    if pair is not None:
        s, t = pair
        out["counterexample"] = {
            "S": sorted(s), "T": sorted(t),
            "v_S": float(cf.value(s)), "v_T": float(cf.value(t)), "v_S_union_T": float(cf.value(s | t)),
        }
    return out


def _run_stage2(s: Scenario) -> tuple[BlockResult, object]:
    b = s.stage2
    ids = b.initial.employee_ids
    efforts = {pid: b.effort for pid in ids}
    traj = simulate_quarters(
        b.initial, b.n_quarters, b.players, b.ledgers, b.mods, b.price_model, b.policy, b.coupling,
        horizon=b.horizon, efforts=efforts, action_grid_res=b.action_grid_res,
        vest_per_quarter=b.vest_per_quarter, exercise_threshold=b.exercise_threshold, rules=b.rules,
    )
    quarters = []
    first_cf = None
    for rec, state in zip(traj.records, traj.states):
        entry = {
            "quarter": rec.quarter_index,
            "share_price": rec.share_price,
            "pure_nash_exists": rec.has_pure_nash,
            "pure_nash": [list(joint) for joint in rec.pure_nash],
            "new_units": rec.new_units,
        }
        if len(ids) >= 2:
            cf = exercise_characteristic_function(state, b.ledgers, b.mods, b.horizon, efforts, b.rules)
            first_cf = first_cf or cf
            entry["characteristic_function"] = {
                _coalition_label(members_of(m)): float(v) for m, v in enumerate(cf.v) if m}
            entry.update(_superadditivity(cf))
        quarters.append(entry)
    final = traj.final_state
    summary = {
        "players": list(b.players),
        "employees": list(ids),
        "policy": b.policy,
        "quarters": quarters,
        "final_state": {
            "share_price": final.share_price,
            "shares_outstanding": final.shares_outstanding,
            "exercised": {p.player_id: p.exercised for p in final.positions},
        },
    }
    columns = ["quarter", "player", "share_price", "exercise_fraction", "hedge_fraction", "effort_level",
               "firm_cap", "payoff", "hold_payoff", "deviation_payoff", "pure_nash_exists", "new_units",
               "shares_outstanding", "vested_fraction"]
    rows = []
    for rec in traj.records:
        for pid in b.players:
            act = rec.actions.get(pid)
            rows.append([
                rec.quarter_index, pid, rec.share_price,
                act.exercise_fraction if act else None,
                act.hedge_fraction if act else None,
                act.effort_level if act else None,
                rec.firm_cap if pid == FIRM else None,
                rec.payoffs[pid], rec.hold_payoffs[pid], rec.deviation_payoffs[pid],
                rec.has_pure_nash, rec.new_units, rec.shares_outstanding,
                rec.vested_fraction.get(pid),
            ])
    return BlockResult(summary, columns, rows), first_cf


def _run_coalition(s: Scenario, derived) -> BlockResult:
    b = s.coalition
    cf = b.game if b.source == "explicit" else derived
    if cf is None:
        raise ValueError("stage2 produced no characteristic function (needs >= 2 employees)")
    verdict = core_is_empty(cf, n_samples=b.n_samples, seed=s.seed)
    core = {"empty": verdict.empty, "exact": verdict.exact}
    if verdict.imputation is not None:
        core["imputation"] = [_exact(Fraction(x)) for x in verdict.imputation]
    if verdict.collection is not None:
        core["certificate"] = {
            "collection": [sorted(members_of(m)) for m in verdict.collection],
            "weights": [_exact(w) for w in verdict.weights],
            "excess": _exact(verdict.excess),
            "verified": verify_certificate(cf, verdict),
        }
    phi = shapley_value(cf)
    summary = {
        "source": b.source,
        "n": cf.n,
        **_superadditivity(cf),
        "core": core,
        "shapley": [_exact(x) for x in phi],
        "shapley_float": [float(x) for x in phi],
    }
    rows = [[_coalition_label(members_of(m)), m, len(members_of(m)), float(v), _exact(v)]
            for m, v in enumerate(cf.v) if m]
    return BlockResult(summary, ["coalition", "mask", "size", "value", "value_exact"], rows)


def _run_prodfn(s: Scenario) -> BlockResult:
    b = s.prodfn
    seed = s.seed if b.seed is None else b.seed
    summary = {"audit": {"n_samples": b.n_samples, "tol": b.tol, "fd_step": b.fd_step, "seed": seed},
               "specs": {}}
    rows = []
    for name, spec in b.specs:
        rep = audit(spec, b.n_samples, b.tol, b.fd_step, seed, y_levels=b.y_levels)
        summary["specs"][name] = {"family": spec.family, "verdicts": rep.verdicts, "evidence": rep.evidence,
                                  "criteria": rep.criteria, "notes": list(rep.notes)}
        rows.extend([name, spec.family, check, verdict] for check, verdict in rep.verdicts.items())
    return BlockResult(summary, ["spec", "family", "check", "verdict"], rows)


def run(scenario: Scenario) -> RunReport:
    """Run the present blocks in fixed order (stage1, stage2, coalition, prodfn)."""
    start = time.perf_counter()
    report = RunReport(scenario=scenario_to_dict(scenario))
    derived = None
    if scenario.stage1 is not None:
        report.blocks["stage1"] = _run_stage1(scenario)
    if scenario.stage2 is not None:
        report.blocks["stage2"], derived = _run_stage2(scenario)
    if scenario.coalition is not None:
        report.blocks["coalition"] = _run_coalition(scenario, derived)
    if scenario.prodfn is not None:
        report.blocks["prodfn"] = _run_prodfn(scenario)
    report.wall_time = time.perf_counter() - start
    return report


# -- emission -----------------------------------------------------------------

def _clean(obj):
    """JSON-ready copy with floats cut to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.12g}")
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            yield prefix, "[]"
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _summary_doc(report: RunReport) -> dict:
    return {"version": report.version, "scenario": report.scenario, "blocks": list(report.blocks)}


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def emit(report: RunReport, fmt: str, out_dir) -> list[Path]:
    """Write the report files and return their paths in writing order."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = report.scenario["name"]
    files = {}
    if fmt == "json-like":
        files[f"{name}.summary.json"] = json.dumps(_clean(_summary_doc(report)), indent=2) + "\n"
        for block, res in report.blocks.items():
            doc = {"block": block, "summary": res.summary,
                   "table": {"columns": res.columns, "rows": res.rows}}
            files[f"{name}.{block}.json"] = json.dumps(_clean(doc), indent=2) + "\n"
    else:
        pairs = list(_flatten(_summary_doc(report)))
        for block, res in report.blocks.items():
            pairs.extend(_flatten(res.summary, block))
        files[f"{name}.summary.csv"] = _csv_text(["key", "value"], pairs)
        for block, res in report.blocks.items():
            files[f"{name}.{block}.csv"] = _csv_text(res.columns, res.rows)
    paths = []
    for fname, text in files.items():
        path = out / fname
        path.write_text(text, encoding="utf-8")
        paths.append(path)
    return paths
