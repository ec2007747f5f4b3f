"""Scenario files: typed blocks, validation with field paths, round-trip.

A scenario is a JSON document::

    {
      "schema_version": 1,          # optional, defaults to 1
      "name": "demo",              # used in output file names
      "seed": 7,                   # master seed, mandatory
      "stage1": {...},             # optional blocks, see README for the schema
      "stage2": {...},
      "coalition": {...},
      "prodfn": {...}
    }

:func:`parse_scenario` reports every validation problem it finds, each with
the dotted path of the offending field (``stage1.ledger.t_e``).
"""

from __future__ import annotations

import dataclasses
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .coalition import CharacteristicFunction, mask_of, members_of
from .errors import ConfigurationError, DomainError, ScenarioParseError, ValidationError
from .payoff_core import CostLedger, EffortPair, HorizonSpec, ModifierSet
from .prodfn import ProductionSpec
from .stage_one import N_COMPONENTS, EmployeeNegotiationParams, ShareholderParams
from .stage_two import (FIRM, POLICIES, EmployeePosition, PriceModel, QuarterRules,
                        QuarterState)

SCHEMA_VERSION = 1
_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True)
class Stage1Block:
    cohort_size: int
    employee: EmployeeNegotiationParams
    shareholders: ShareholderParams
    modifiers: ModifierSet
    horizon: HorizonSpec
    ledger: CostLedger = CostLedger()
    effort: EffortPair = EffortPair()
    employee_modifiers: Optional[ModifierSet] = None
    grid_res: int = 2
    max_rounds: int = 20
    perturbation: tuple = (0.0, 0.0, 0.0)
    bounds: Optional[tuple] = None
    information_leak: float = 0.0
    share_view: str = "firm"


@dataclass(frozen=True)
class Stage2Block:
    players: tuple
    initial: QuarterState
    ledgers: dict
    modifiers: ModifierSet
    price_model: PriceModel
    n_quarters: int
    policy: str
    horizon: HorizonSpec = HorizonSpec()
    employee_modifiers: Optional[ModifierSet] = None
    effort: EffortPair = EffortPair()
    rules: QuarterRules = QuarterRules()
    coupling: float = 0.25
    action_grid_res: int = 2
    vest_per_quarter: float = 0.25
    exercise_threshold: float = 1.2

    @property
    def mods(self):
        if self.employee_modifiers is None:
            return self.modifiers
        return (self.modifiers, self.employee_modifiers)


@dataclass(frozen=True)
class CoalitionBlock:
    source: str  # "explicit" or "derive-from-stage2"
    game: Optional[CharacteristicFunction] = None
    n_samples: int = 20_000


@dataclass(frozen=True)
class ProdfnBlock:
    specs: tuple  # ((name, ProductionSpec), ...)
    n_samples: int = 256
    tol: float = 1e-6
    fd_step: float = 1e-4
    seed: Optional[int] = None
    y_levels: tuple = ()


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    stage1: Optional[Stage1Block] = None
    stage2: Optional[Stage2Block] = None
    coalition: Optional[CoalitionBlock] = None
    prodfn: Optional[ProdfnBlock] = None

    def with_seed(self, seed: int) -> "Scenario":
        return dataclasses.replace(self, seed=int(seed))


# -- validation helpers -------------------------------------------------------

class _Collector:
    def __init__(self):
        self.errors = []

    def add(self, path, msg):
        self.errors.append((path, msg))


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _number(data, key, path, errs, default=None, required=False, lo=None, hi=None, integer=False):
    if key not in data:
        if required:
            errs.add(f"{path}.{key}", "required field is missing")
        return default
    value = data[key]
    ok = _is_int(value) if integer else _is_number(value)
    if not ok or (not integer and not math.isfinite(value)):
        errs.add(f"{path}.{key}", "expected an integer" if integer else "expected a finite number")
        return default
    if lo is not None and value < lo or hi is not None and value > hi:
        errs.add(f"{path}.{key}", f"must lie in [{lo}, {hi}]")
        return default
    return value


def _check_keys(data, path, allowed, errs) -> bool:
    if not isinstance(data, dict):
        errs.add(path, "expected an object")
        return False
    for key in data:
        if key not in allowed:
            errs.add(f"{path}.{key}", "unknown field")
    return True


def _build(cls, data, path, errs, optional=False):
    """Construct a defaulted dataclass field by field, so an invariant
    breach is reported at the path of the field that caused it."""
    if data is None:
        return None if optional else cls()
    names = [f.name for f in dataclasses.fields(cls)]
    if not _check_keys(data, path, names, errs):
        return None
    defaults = cls()
    kwargs = {}
    bad = False
    for key, value in data.items():
        if key not in names:
            bad = True
            continue
        default = getattr(defaults, key)
        if isinstance(default, tuple):
            if not isinstance(value, list):
                errs.add(f"{path}.{key}", "expected a list")
                bad = True
                continue
            value = tuple(value)
        elif isinstance(default, bool):
            if not isinstance(value, bool):
                errs.add(f"{path}.{key}", "expected true or false")
                bad = True
                continue
        elif isinstance(default, int) and not _is_int(value):
            errs.add(f"{path}.{key}", "expected an integer")
            bad = True
            continue
        elif isinstance(default, float) and not (_is_number(value) and math.isfinite(value)):
            errs.add(f"{path}.{key}", "expected a finite number")
            bad = True
            continue
        elif isinstance(default, str) and not isinstance(value, str):
            errs.add(f"{path}.{key}", "expected a string")
            bad = True
            continue
        try:
            cls(**{key: value})
        except (DomainError, ConfigurationError, TypeError, ValueError) as exc:
            errs.add(f"{path}.{key}", str(exc))
            bad = True
            continue
        kwargs[key] = value
    if bad:
        return None
    try:
        return cls(**kwargs)
    except (DomainError, ConfigurationError, TypeError, ValueError) as exc:
        errs.add(path, str(exc))
        return None


def _fraction(value, path, errs):
    if _is_number(value) and math.isfinite(value):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    errs.add(path, "expected a number or a fraction string like '2/3'")
    return None


# -- block parsers --------------------------------------------------------------

_STAGE1_KEYS = ("cohort_size", "employee", "shareholders", "modifiers", "employee_modifiers", "horizon",
                "ledger", "effort", "grid_res", "max_rounds", "perturbation", "bounds",
                "information_leak", "share_view")


def _parse_stage1(data, errs):
    path = "stage1"
    if not _check_keys(data, path, _STAGE1_KEYS, errs):
        return None
    n0 = len(errs.errors)
    cohort = _number(data, "cohort_size", path, errs, required=True, lo=1, integer=True)
    grid_res = _number(data, "grid_res", path, errs, default=2, lo=2, hi=5, integer=True)
    max_rounds = _number(data, "max_rounds", path, errs, default=20, lo=1, integer=True)
    leak = _number(data, "information_leak", path, errs, default=0.0, lo=0.0)
    share_view = data.get("share_view", "firm")
    if share_view not in ("firm", "employee"):
        errs.add(f"{path}.share_view", "expected 'firm' or 'employee'")
    pert = data.get("perturbation", {})
    sd = (0.0, 0.0, 0.0)
    if _check_keys(pert, f"{path}.perturbation", ("v", "u", "t"), errs):
        sd = tuple(float(_number(pert, k, f"{path}.perturbation", errs, default=0.0, lo=0.0)) for k in "vut")
    bounds = data.get("bounds")
    if bounds is not None:
        ok = (isinstance(bounds, list) and len(bounds) == N_COMPONENTS
              and all(isinstance(b, list) and len(b) == 2 and all(_is_number(v) for v in b) for b in bounds))
        if not ok:
            errs.add(f"{path}.bounds", f"expected {N_COMPONENTS} [lo, hi] pairs")
        elif any(not 0 <= lo <= hi <= 1 for lo, hi in bounds):
            errs.add(f"{path}.bounds", "bounds need 0 <= lo <= hi <= 1")
        else:
            bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
    for key in ("employee", "shareholders", "modifiers", "horizon"):
        if key not in data:
            errs.add(f"{path}.{key}", "required field is missing")
    block = dict(
        employee=_build(EmployeeNegotiationParams, data.get("employee", {}), f"{path}.employee", errs),
        shareholders=_build(ShareholderParams, data.get("shareholders", {}), f"{path}.shareholders", errs),
        modifiers=_build(ModifierSet, data.get("modifiers", {}), f"{path}.modifiers", errs),
        employee_modifiers=_build(ModifierSet, data.get("employee_modifiers"), f"{path}.employee_modifiers",
                                  errs, optional=True),
        horizon=_build(HorizonSpec, data.get("horizon", {}), f"{path}.horizon", errs),
        ledger=_build(CostLedger, data.get("ledger"), f"{path}.ledger", errs),
        effort=_build(EffortPair, data.get("effort"), f"{path}.effort", errs),
    )
    if len(errs.errors) > n0:
        return None
    return Stage1Block(cohort_size=cohort, grid_res=grid_res, max_rounds=max_rounds, perturbation=sd,
                       bounds=bounds, information_leak=float(leak), share_view=share_view, **block)


_STAGE2_KEYS = ("players", "positions", "share_price", "shares_outstanding", "ledgers", "modifiers",
                "employee_modifiers", "horizon", "effort", "price_model", "rules", "n_quarters", "coupling",
                "policy", "action_grid_res", "vest_per_quarter", "exercise_threshold")
_POSITION_KEYS = ("player_id", "granted", "strike", "vested_fraction", "exercised", "shares_held", "carry_over")
_RULE_KEYS = ("hedge_levels", "effort_levels", "lam_max", "exercise_cap", "cell_cap")


def _parse_position(data, path, errs):
    if not _check_keys(data, path, _POSITION_KEYS, errs):
        return None
    pid = data.get("player_id")
    if not isinstance(pid, str) or not pid:
        errs.add(f"{path}.player_id", "expected a non-empty string")
        return None
    n0 = len(errs.errors)
    kw = {"player_id": pid}
    for key in _POSITION_KEYS[1:]:
        req = key in ("granted", "strike")
        v = _number(data, key, path, errs, required=req)
        if v is not None:
            kw[key] = v
    if len(errs.errors) > n0:
        return None
    try:
        return EmployeePosition(**kw)
    except DomainError as exc:
        errs.add(path, str(exc))
        return None


def _parse_rules(data, path, errs):
    if data is None:
        return None
    if not _check_keys(data, path, _RULE_KEYS, errs):
        return None
    kw = {}
    for key in ("hedge_levels", "effort_levels"):
        if key in data:
            v = data[key]
            if not (isinstance(v, list) and v and all(_is_number(x) for x in v)):
                errs.add(f"{path}.{key}", "expected a non-empty list of numbers")
                return None
            kw[key] = tuple(v)
    for key in ("lam_max", "exercise_cap"):
        v = _number(data, key, path, errs)
        if v is not None:
            kw[key] = v
    v = _number(data, "cell_cap", path, errs, lo=1, integer=True)
    if v is not None:
        kw["cell_cap"] = v
    return kw


def _parse_stage2(data, errs):
    path = "stage2"
    if not _check_keys(data, path, _STAGE2_KEYS, errs):
        return None
    n0 = len(errs.errors)
    positions = data.get("positions")
    parsed_pos = []
    if not isinstance(positions, list) or not positions:
        errs.add(f"{path}.positions", "expected a non-empty list of employee positions")
    else:
        for i, pos in enumerate(positions):
            parsed_pos.append(_parse_position(pos, f"{path}.positions[{i}]", errs))
    ids = [p.player_id for p in parsed_pos if p is not None]
    if len(set(ids)) != len(ids):
        errs.add(f"{path}.positions", "player ids must be unique")
    if FIRM in ids:
        errs.add(f"{path}.positions", f"{FIRM!r} is reserved for the firm player")

    players = data.get("players")
    if not (isinstance(players, list) and all(isinstance(p, str) for p in players)):
        errs.add(f"{path}.players", "expected a list of player ids")
        players = []
    else:
        if len(players) < 2:
            errs.add(f"{path}.players", "a quarter game needs at least two players")
        if len(set(players)) != len(players):
            errs.add(f"{path}.players", "players must be distinct")
        for i, pid in enumerate(players):
            if pid != FIRM and pid not in ids:
                errs.add(f"{path}.players[{i}]", f"unknown player id {pid!r}")

    price = _number(data, "share_price", path, errs, required=True)
    if price is not None and price <= 0:
        errs.add(f"{path}.share_price", "must be > 0")
    outstanding = _number(data, "shares_outstanding", path, errs, required=True)
    if outstanding is not None and outstanding <= 0:
        errs.add(f"{path}.shares_outstanding", "must be > 0")

    ledgers = {}
    raw_ledgers = data.get("ledgers", {})
    if not isinstance(raw_ledgers, dict):
        errs.add(f"{path}.ledgers", "expected an object keyed by player id")
    else:
        for pid, led in raw_ledgers.items():
            if pid not in ids:
                errs.add(f"{path}.ledgers.{pid}", "unknown player id")
            ledgers[pid] = _build(CostLedger, led, f"{path}.ledgers.{pid}", errs)

    policy = data.get("policy")
    if policy not in POLICIES:
        errs.add(f"{path}.policy", f"expected one of {list(POLICIES)}")
    n_quarters = _number(data, "n_quarters", path, errs, required=True, lo=1, integer=True)
    coupling = _number(data, "coupling", path, errs, default=0.25, lo=0.0)
    if coupling is not None and coupling >= 1.0:
        errs.add(f"{path}.coupling", "must lie in [0, 1)")
    grid = _number(data, "action_grid_res", path, errs, default=2, lo=2, integer=True)
    vest = _number(data, "vest_per_quarter", path, errs, default=0.25, lo=0.0, hi=1.0)
    thresh = _number(data, "exercise_threshold", path, errs, default=1.2, lo=0.0)

    if "modifiers" not in data:
        errs.add(f"{path}.modifiers", "required field is missing")
    if "price_model" not in data:
        errs.add(f"{path}.price_model", "required field is missing")
    mods = _build(ModifierSet, data.get("modifiers", {}), f"{path}.modifiers", errs)
    mods_emp = _build(ModifierSet, data.get("employee_modifiers"), f"{path}.employee_modifiers", errs,
                      optional=True)
    horizon = _build(HorizonSpec, data.get("horizon"), f"{path}.horizon", errs)
    effort = _build(EffortPair, data.get("effort"), f"{path}.effort", errs)
    raw_price = data.get("price_model", {})
    price_model = _build(PriceModel, raw_price, f"{path}.price_model", errs)
    rule_kw = _parse_rules(data.get("rules"), f"{path}.rules", errs)
    rules = None
    if price_model is not None:
        try:
            rules = QuarterRules(dilution_sensitivity=price_model.dilution_sensitivity, **(rule_kw or {}))
        except (DomainError, TypeError) as exc:
            errs.add(f"{path}.rules", str(exc))

    if len(errs.errors) > n0:
        return None
    try:
        initial = QuarterState(0, price, outstanding, tuple(parsed_pos))
    except DomainError as exc:
        errs.add(path, str(exc))
        return None
    return Stage2Block(players=tuple(players), initial=initial, ledgers=ledgers, modifiers=mods,
                       employee_modifiers=mods_emp, horizon=horizon, effort=effort, price_model=price_model,
                       rules=rules, n_quarters=n_quarters, coupling=float(coupling), policy=policy,
                       action_grid_res=grid, vest_per_quarter=float(vest), exercise_threshold=float(thresh))


def _parse_coalition(data, errs, has_stage2):
    path = "coalition"
    if not _check_keys(data, path, ("source", "n", "values", "n_samples"), errs):
        return None
    source = data.get("source", "explicit")
    n_samples = _number(data, "n_samples", path, errs, default=20_000, lo=1, integer=True)
    if source == "derive-from-stage2":
        if not has_stage2:
            errs.add(f"{path}.source", "derive-from-stage2 needs a stage2 block")
        for key in ("n", "values"):
            if key in data:
                errs.add(f"{path}.{key}", "not allowed when the game is derived from stage2")
        return CoalitionBlock(source, None, n_samples)
    if source != "explicit":
        errs.add(f"{path}.source", "expected 'explicit' or 'derive-from-stage2'")
        return None
    n = _number(data, "n", path, errs, required=True, lo=2, hi=6, integer=True)
    values = data.get("values")
    if not isinstance(values, list):
        errs.add(f"{path}.values", "expected a list of {members, value} entries")
        return None
    if n is None:
        return None
    mapping = {}
    n0 = len(errs.errors)
    for i, entry in enumerate(values):
        epath = f"{path}.values[{i}]"
        if not _check_keys(entry, epath, ("members", "value"), errs):
            continue
        members = entry.get("members")
        if not (isinstance(members, list) and members and all(_is_int(m) and 0 <= m < n for m in members)
                and len(set(members)) == len(members)):
            errs.add(f"{epath}.members", f"expected distinct player indices in [0, {n})")
            continue
        value = _fraction(entry.get("value"), f"{epath}.value", errs)
        key = mask_of(members)
        if key in mapping:
            errs.add(f"{epath}.members", "coalition listed twice")
        mapping[key] = value
    if len(errs.errors) > n0:
        return None
    return CoalitionBlock(source, CharacteristicFunction.from_mapping(
        n, {members_of(m): v for m, v in mapping.items()}), n_samples)


_SPEC_KEYS = ("name", "family", "params", "n_factors", "domain_box", "vesting_threshold")


def _parse_prodfn(data, errs):
    path = "prodfn"
    if not _check_keys(data, path, ("specs", "audit"), errs):
        return None
    n0 = len(errs.errors)
    specs = []
    raw = data.get("specs")
    if not isinstance(raw, list) or not raw:
        errs.add(f"{path}.specs", "expected a non-empty list of production specs")
        raw = []
    names = set()
    for i, entry in enumerate(raw):
        spath = f"{path}.specs[{i}]"
        if not _check_keys(entry, spath, _SPEC_KEYS, errs):
            continue
        name = entry.get("name")
        if not isinstance(name, str) or not _NAME_RE.match(name):
            errs.add(f"{spath}.name", "expected a name of letters, digits, '_', '-' or '.'")
            continue
        if name in names:
            errs.add(f"{spath}.name", "duplicate spec name")
        names.add(name)
        params = entry.get("params", {})
        if not isinstance(params, dict):
            errs.add(f"{spath}.params", "expected an object")
            continue
        params = {k: tuple(v) if isinstance(v, list) else v for k, v in params.items()}
        box = entry.get("domain_box")
        if not (isinstance(box, list) and all(isinstance(b, list) and len(b) == 2 for b in box)):
            errs.add(f"{spath}.domain_box", "expected a list of [lo, hi] pairs")
            continue
        try:
            spec = ProductionSpec(entry.get("family"), params, entry.get("n_factors"), tuple(tuple(b) for b in box),
                                  entry.get("vesting_threshold"))
        except (DomainError, TypeError, ValueError) as exc:
            errs.add(spath, str(exc))
            continue
        specs.append((name, spec))
    audit = data.get("audit", {})
    apath = f"{path}.audit"
    kw = {}
    if _check_keys(audit, apath, ("n_samples", "tol", "fd_step", "seed", "y_levels"), errs):
        kw["n_samples"] = _number(audit, "n_samples", apath, errs, default=256, lo=100, integer=True)
        kw["seed"] = _number(audit, "seed", apath, errs, default=None, lo=0, integer=True)
        for key, default in (("tol", 1e-6), ("fd_step", 1e-4)):
            v = _number(audit, key, apath, errs, default=default)
            if v is not None and v <= 0:
                errs.add(f"{apath}.{key}", "must be > 0")
            kw[key] = v
        levels = audit.get("y_levels", [])
        if not (isinstance(levels, list) and all(_is_number(y) and y > 0 for y in levels)):
            errs.add(f"{apath}.y_levels", "expected a list of positive numbers")
        else:
            kw["y_levels"] = tuple(levels)
    if len(errs.errors) > n0:
        return None
    return ProdfnBlock(specs=tuple(specs), **kw)


# -- public API -----------------------------------------------------------------

def scenario_from_dict(data) -> Scenario:
    """Validate a decoded scenario document; raises :class:`ValidationError`
    listing every problem."""
    errs = _Collector()
    if not _check_keys(data, "$", ("schema_version", "name", "seed", "stage1", "stage2", "coalition", "prodfn"),
                       errs):
        raise ValidationError(errs.errors)
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        errs.add("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    name = data.get("name")
    if not isinstance(name, str) or not _NAME_RE.match(name):
        errs.add("name", "expected a name of letters, digits, '_', '-' or '.'")
    seed = data.get("seed")
    if not _is_int(seed) or seed < 0:
        errs.add("seed", "required non-negative integer")
    blocks = {}
    if "stage1" in data:
        blocks["stage1"] = _parse_stage1(data["stage1"], errs)
    if "stage2" in data:
        blocks["stage2"] = _parse_stage2(data["stage2"], errs)
    if "coalition" in data:
        blocks["coalition"] = _parse_coalition(data["coalition"], errs, "stage2" in data)
    if "prodfn" in data:
        blocks["prodfn"] = _parse_prodfn(data["prodfn"], errs)
    if errs.errors:
        raise ValidationError(errs.errors)
    return Scenario(name=name, seed=seed, **blocks)


def loads_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, line=exc.lineno) from None
    return scenario_from_dict(data)


def parse_scenario(path) -> Scenario:
    """Read and validate a scenario file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads_scenario(text)


# -- serialization --------------------------------------------------------------

def _plain(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (tuple, list)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    return obj


def _fraction_text(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def scenario_to_dict(s: Scenario) -> dict:
    """Canonical document for ``s``; ``scenario_from_dict`` inverts it."""
    out = {"schema_version": SCHEMA_VERSION, "name": s.name, "seed": s.seed}
    if s.stage1 is not None:
        b = s.stage1
        d = {f.name: _plain(getattr(b, f.name)) for f in dataclasses.fields(b)}
        d["perturbation"] = dict(zip("vut", b.perturbation))
        if b.bounds is None:
            del d["bounds"]
        if b.employee_modifiers is None:
            del d["employee_modifiers"]
        out["stage1"] = d
    if s.stage2 is not None:
        b = s.stage2
        d = {
            "players": list(b.players),
            "positions": [_plain(p) for p in b.initial.positions],
            "share_price": b.initial.share_price,
            "shares_outstanding": b.initial.shares_outstanding,
            "ledgers": {k: _plain(v) for k, v in b.ledgers.items()},
            "modifiers": _plain(b.modifiers),
            "horizon": _plain(b.horizon),
            "effort": _plain(b.effort),
            "price_model": _plain(b.price_model),
            "rules": {k: v for k, v in _plain(b.rules).items() if k != "dilution_sensitivity" and v is not None},
        }
        if b.employee_modifiers is not None:
            d["employee_modifiers"] = _plain(b.employee_modifiers)
        for key in ("n_quarters", "coupling", "policy", "action_grid_res", "vest_per_quarter",
                    "exercise_threshold"):
            d[key] = getattr(b, key)
        out["stage2"] = d
    if s.coalition is not None:
        b = s.coalition
        d = {"source": b.source, "n_samples": b.n_samples}
        if b.game is not None:
            d["n"] = b.game.n
            d["values"] = [{"members": sorted(members_of(m)), "value": _fraction_text(v)}
                           for m, v in enumerate(b.game.v) if m and v != 0]
        out["coalition"] = d
    if s.prodfn is not None:
        b = s.prodfn
        specs = []
        for name, spec in b.specs:
            entry = {"name": name, "family": spec.family, "params": _plain(spec.params),
                     "n_factors": spec.n_factors, "domain_box": _plain(spec.domain_box)}
            if spec.vesting_threshold is not None:
                entry["vesting_threshold"] = spec.vesting_threshold
            specs.append(entry)
        audit = {"n_samples": b.n_samples, "tol": b.tol, "fd_step": b.fd_step, "y_levels": list(b.y_levels)}
        if b.seed is not None:
            audit["seed"] = b.seed
        out["prodfn"] = {"specs": specs, "audit": audit}
    return out


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"
