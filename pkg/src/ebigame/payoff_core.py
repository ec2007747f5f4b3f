"""Game values for the grant negotiation (stage one) and the quarterly
post-grant games (stage two).

All monetary inputs live on a :class:`CostLedger` for one company/employee
pair. Exponents are products of the scalar modifiers in a
:class:`ModifierSet`; brackets that go negative are raised with
:func:`signed_pow` so fractional exponents stay real.

Integrals over the cost horizon default to a constant time profile, in which
case they collapse to ``integrand * limit``. A callable profile returning a
ledger per time point may be passed instead; quadrature is the composite
trapezoid rule on ``n_steps`` equally spaced nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
    "CostLedger",
    "ModifierSet",
    "EffortPair",
    "HorizonSpec",
    "signed_pow",
    "trapezoid_1d",
    "trapezoid_2d",
    "stage1_value_company",
    "stage1_value_employee",
    "stage2_value_company",
    "stage2_value_employee",
    "company_objective_vector",
    "scalarize",
]

_COST_FIELDS = ("t_c", "t_e", "m_c", "m_e", "c_c", "c_e", "l_c", "l_e", "lam_c", "lam_e")


def _require_finite(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not math.isfinite(value):
            raise DomainError(f"{type(obj).__name__}.{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class CostLedger:
    """Monetary inputs for one company/employee pair.

    ``v_*`` are grant values, ``t_*`` transaction costs, ``m_*`` monitoring
    costs, ``c_*`` compliance costs, ``l_*`` tax-related losses, ``lam_*``
    dilution losses and ``u_*`` utilities. Suffix ``_c`` is the company side,
    ``_e`` the employee side.
    """

    v_c: float = 0.0
    v_e: float = 0.0
    t_c: float = 0.0
    t_e: float = 0.0
    m_c: float = 0.0
    m_e: float = 0.0
    c_c: float = 0.0
    c_e: float = 0.0
    l_c: float = 0.0
    l_e: float = 0.0
    lam_c: float = 0.0
    lam_e: float = 0.0
    u_c: float = 0.0
    u_e: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        _require_finite(self, [f.name for f in fields(self)])
        for name in _COST_FIELDS:
            if getattr(self, name) < 0:
                raise DomainError(f"CostLedger.{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class ModifierSet:
    """Scalar exponent modifiers.

    pi: labor substitution, >= 0. psi: effort deviation, >= 0.
    lam: monetization/hedging, in [0, 2]. omega: proportional share, in (0, 1].
    Scenarios carry one set for the firm view and one for the employee view.
    """

    pi: float = 1.0
    psi: float = 1.0
    lam: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        _require_finite(self, ("pi", "psi", "lam", "omega"))
        if self.pi < 0:
            raise DomainError(f"ModifierSet.pi must be >= 0, got {self.pi}")
        if self.psi < 0:
            raise DomainError(f"ModifierSet.psi must be >= 0, got {self.psi}")
        if not 0.0 <= self.lam <= 2.0:
            raise DomainError(f"ModifierSet.lam must lie in [0, 2], got {self.lam}")
        if not 0.0 < self.omega <= 1.0:
            raise DomainError(f"ModifierSet.omega must lie in (0, 1], got {self.omega}")


@dataclass(frozen=True)
class EffortPair:
    """Actual effort ``e_a`` and minimum required effort ``e_r``."""

    e_a: float = 0.0
    e_r: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "e_a", float(self.e_a))
        object.__setattr__(self, "e_r", float(self.e_r))
        _require_finite(self, ("e_a", "e_r"))
        if self.e_a < 0 or self.e_r < 0:
            raise DomainError("effort levels must be >= 0")


@dataclass(frozen=True)
class HorizonSpec:
    """Integration limits, quadrature resolution and cohort size ``gamma``."""

    t_c_limit: float = 1.0
    t_e_limit: float = 1.0
    h_limit: float = 1.0
    n_steps: int = 2
    gamma: int = 1

    def __post_init__(self):
        for name in ("t_c_limit", "t_e_limit", "h_limit"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"HorizonSpec.{name} must be finite and > 0, got {value}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 2:
            raise ConfigurationError(f"HorizonSpec.n_steps must be an integer >= 2, got {self.n_steps}")
        if int(self.gamma) != self.gamma or self.gamma < 1:
            raise DomainError(f"HorizonSpec.gamma must be an integer >= 1, got {self.gamma}")
        object.__setattr__(self, "n_steps", int(self.n_steps))
        object.__setattr__(self, "gamma", int(self.gamma))


def signed_pow(base: float, exp: float) -> float:
    """Return ``sgn(base) * |base| ** exp``.

    >>> signed_pow(-4.0, 0.5)
    -2.0
    """
    base = float(base)
    exp = float(exp)
    if not (math.isfinite(base) and math.isfinite(exp)):
        raise DomainError(f"signed_pow needs finite inputs, got ({base}, {exp})")
    if exp < 0:
        raise DomainError(f"signed_pow exponent must be >= 0, got {exp}")
    if base == 0.0:
        # sgn(0) = 0, so this also covers exp == 0
        return 0.0
    return math.copysign(abs(base) ** exp, base)


def trapezoid_1d(func: Callable[[float], float], limit: float, n_steps: int) -> float:
    """Composite trapezoid rule for ``func`` on ``[0, limit]`` with ``n_steps`` nodes."""
    if n_steps < 2:
        raise ConfigurationError(f"n_steps must be >= 2, got {n_steps}")
    grid = np.linspace(0.0, limit, n_steps)
    values = np.array([func(t) for t in grid], dtype=float)
    return float(np.trapezoid(values, grid))


def trapezoid_2d(func: Callable[[float, float], float], h_limit: float, t_limit: float,
                 n_steps: int) -> float:
    """Tensor-product trapezoid rule on ``[0, h_limit] x [0, t_limit]``."""
    if n_steps < 2:
        raise ConfigurationError(f"n_steps must be >= 2, got {n_steps}")
    hs = np.linspace(0.0, h_limit, n_steps)
    ts = np.linspace(0.0, t_limit, n_steps)
    values = np.array([[func(h, t) for t in ts] for h in hs], dtype=float)
    return float(np.trapezoid(np.trapezoid(values, ts, axis=1), hs))


# -- brackets -----------------------------------------------------------------

def _company_bracket(led: CostLedger, effort_term: float) -> float:
    return (led.u_c + effort_term - led.v_c - led.c_c - led.lam_c
            - led.m_c - led.l_c - led.t_c)


def _firm_share_bracket(led: CostLedger, e_a: float) -> float:
    # the firm's value as seen through the employee's proportional share
    return (led.u_c + e_a + led.v_c - led.t_c - led.lam_c
            - led.m_c - led.l_c - led.c_c)


def _employee_bracket(led: CostLedger, e_a: float) -> float:
    return (led.u_e + led.v_e - e_a - led.t_e - led.lam_e
            - led.m_e - led.l_e - led.c_e)


def _company_costs(led: CostLedger) -> float:
    return led.v_c + led.t_c + led.m_c + led.l_c + led.c_c


def _share_mods(mods_firm: ModifierSet, mods_emp: ModifierSet, share_view: str) -> ModifierSet:
    if share_view == "firm":
        return mods_firm
    if share_view == "employee":
        return mods_emp
    raise ConfigurationError(f"share_view must be 'firm' or 'employee', got {share_view!r}")


def stage1_value_company(ledger: CostLedger, effort: EffortPair, mods: ModifierSet) -> float:
    """Stage-one game value to the company, exponent ``pi * lam``."""
    return signed_pow(_company_bracket(ledger, effort.e_r), mods.pi * mods.lam)


def stage2_value_company(ledger: CostLedger, effort: EffortPair, mods: ModifierSet) -> float:
    """Stage-two (per quarter) game value to the company, exponent ``pi * psi * lam``."""
    return signed_pow(_company_bracket(ledger, effort.e_a), mods.pi * mods.psi * mods.lam)


def stage1_value_employee(
    ledger: CostLedger,
    effort: EffortPair,
    mods_firm: ModifierSet,
    mods_emp: ModifierSet,
    horizon: HorizonSpec,
    profile: Optional[Callable[[float], CostLedger]] = None,
    share_view: str = "firm",
) -> float:
    """Stage-one game value to the employee.

    The larger of the (zero-clamped) firm-share integral over
    ``[0, t_c_limit]`` and the employee-net integral over ``[0, t_e_limit]``.
    ``share_view`` picks which modifier set supplies ``pi * omega`` for the
    firm-share branch.
    """
    # without a profile the integrand is constant and the integral is exact
    share = _share_mods(mods_firm, mods_emp, share_view)
    e1 = share.pi * share.omega
    e2 = mods_emp.pi * mods_emp.lam
    if profile is None:
        i1 = signed_pow(_firm_share_bracket(ledger, effort.e_a), e1) * horizon.t_c_limit
        i2 = signed_pow(_employee_bracket(ledger, effort.e_a), e2) * horizon.t_e_limit
    else:
        i1 = trapezoid_1d(lambda t: signed_pow(_firm_share_bracket(profile(t), effort.e_a), e1),
                          horizon.t_c_limit, horizon.n_steps)
        i2 = trapezoid_1d(lambda t: signed_pow(_employee_bracket(profile(t), effort.e_a), e2),
                          horizon.t_e_limit, horizon.n_steps)
    return max(max(i1, 0.0), i2)


def stage2_value_employee(
    ledger: CostLedger,
    effort: EffortPair,
    mods_firm: ModifierSet,
    mods_emp: ModifierSet,
    horizon: HorizonSpec,
    profile: Optional[Callable[[float, float], CostLedger]] = None,
    share_view: str = "firm",
) -> float:
    """Stage-two game value to the employee: double integrals over the quarter
    horizon ``[0, h_limit]`` and the cost horizon, otherwise shaped like
    :func:`stage1_value_employee`. ``profile`` takes ``(h, t)``.
    """
    share = _share_mods(mods_firm, mods_emp, share_view)
    e1 = share.pi * share.psi * share.lam * share.omega
    e2 = mods_emp.pi * mods_emp.psi * mods_emp.lam
    n = horizon.n_steps

    if profile is None:
        i1 = signed_pow(_firm_share_bracket(ledger, effort.e_a), e1) * horizon.h_limit * horizon.t_c_limit
        i2 = signed_pow(_employee_bracket(ledger, effort.e_a), e2) * horizon.h_limit * horizon.t_e_limit
    else:
        i1 = trapezoid_2d(lambda h, t: signed_pow(_firm_share_bracket(profile(h, t), effort.e_a), e1),
                          horizon.h_limit, horizon.t_c_limit, n)
        i2 = trapezoid_2d(lambda h, t: signed_pow(_employee_bracket(profile(h, t), effort.e_a), e2),
                          horizon.h_limit, horizon.t_e_limit, n)
    return max(max(i1, 0.0), i2)


def company_objective_vector(
    ledger: CostLedger,
    effort: EffortPair,
    mods: ModifierSet,
    horizon: HorizonSpec,
    stage: int = 1,
    profile=None,
) -> tuple[float, float, float]:
    """The company's three objectives, unscalarized.

    Returns ``(cost_integral, effort_gap, net_value)``: the integrated cost
    load (minimize), ``e_r - e_a`` (minimize) and the raw company bracket
    (maximize). Stage two integrates over the quarter horizon as well, with
    exponent ``pi * lam``, and uses actual effort in the bracket.
    """
    if stage == 1:
        at = profile if profile is not None else (lambda _t: ledger)
        cost = trapezoid_1d(lambda t: signed_pow(_company_costs(at(t)), mods.pi),
                            horizon.t_c_limit, horizon.n_steps)
        net = _company_bracket(ledger, effort.e_r)
    elif stage == 2:
        at = profile if profile is not None else (lambda _h, _t: ledger)
        cost = trapezoid_2d(lambda h, t: signed_pow(_company_costs(at(h, t)), mods.pi * mods.lam),
                            horizon.h_limit, horizon.t_c_limit, horizon.n_steps)
        net = _company_bracket(ledger, effort.e_a)
    else:
        raise ConfigurationError(f"stage must be 1 or 2, got {stage}")
    return cost, effort.e_r - effort.e_a, net


def scalarize(objectives: Sequence[float], weights: Sequence[float], senses: Sequence[str]) -> float:
    """Weighted sum with ``"max"`` terms added and ``"min"`` terms subtracted."""
    if not (len(objectives) == len(weights) == len(senses)):
        raise ValueError("objectives, weights and senses must have equal length")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and >= 0")
    if w.sum() <= 0:
        raise ValueError("weights must not all be zero")
    total = 0.0
    for value, weight, sense in zip(objectives, w, senses):
        if sense == "max":
            total += weight * value
        elif sense == "min":
            total -= weight * value
        else:
            raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    return float(total)
