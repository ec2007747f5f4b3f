"""Numerical audit of incentive-augmented production functions.

The last factor of every :class:`ProductionSpec` is the incentive input
``x_inc``. It enters through an effective input ``z = offset + coef * x_inc``
(so a negative ``coef`` models de-motivation), and a vesting threshold
switches the incentive off below it, which puts a jump into ``f``.

:func:`audit` runs eight checks on quasi-random samples from the domain box,
one per classical production-function assumption:

====  ======================================================================
A1    factors are non-negative (a negative factor value never changes f)
A2    marginal products are >= 0 and diminishing
A3    f is finite and non-negative over the box
A4    f(0) = 0
A5    more input never lowers output
A6    f is continuous (no jumps) in the interior
A7    upper level sets V(y) = {x : f(x) >= y} are convex
A8    V(y) is closed and non-empty, without runaway returns along a ray
====  ======================================================================

A "holds" verdict means no counterexample was found by the sampled tests,
not a proof. Every "violated" verdict carries the witnessing points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import ConfigurationError, DomainError

FAMILIES = ("cobb-douglas-incentive", "ces-incentive", "piecewise-vesting")
CHECKS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8")
HOLDS, VIOLATED, INCONCLUSIVE = "holds", "violated", "inconclusive"

# lab conventions, echoed in every report header
INCREASING_FRACTION = 0.10
FLAT_FRACTION = 0.90
DIMINISHING_FRACTION = 0.90
INTERIOR_MARGIN = 0.10
LEVEL_QUANTILES = (0.25, 0.5, 0.75)
RAY_POINTS = 17
SLICE_POINTS = 33
BISECTION_STEPS = 40


@dataclass(frozen=True)
class ProductionSpec:
    """A parametric production function with an incentive factor.

    ``params`` by family:

    * ``cobb-douglas-incentive`` / ``piecewise-vesting``: ``scale``,
      ``alphas`` (one exponent per factor, the last applies to ``z``),
      ``incentive_coef``, ``incentive_offset``.
    * ``ces-incentive``: ``scale``, ``shares`` (one per factor), ``rho``
      (non-zero), ``nu`` (returns to scale), ``incentive_coef``,
      ``incentive_offset``.

    ``piecewise-vesting`` requires ``vesting_threshold``; the other families
    accept one optionally.
    """

    family: str
    params: dict
    n_factors: int
    domain_box: tuple
    vesting_threshold: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if int(self.n_factors) != self.n_factors or self.n_factors < 2:
            raise DomainError("n_factors must be an integer >= 2")
        box = tuple((float(lo), float(hi)) for lo, hi in self.domain_box)
        if len(box) != self.n_factors:
            raise DomainError("domain_box needs one (lo, hi) pair per factor")
        for lo, hi in box:
            if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
                raise DomainError(f"domain_box entries need finite lo < hi, got ({lo}, {hi})")
        object.__setattr__(self, "domain_box", box)
        p = dict(self.params)
        p.setdefault("scale", 1.0)
        p.setdefault("incentive_coef", 1.0)
        p.setdefault("incentive_offset", 0.0)
        if self.family == "ces-incentive":
            if "shares" not in p or "rho" not in p:
                raise DomainError("ces-incentive needs 'shares' and 'rho'")
            p["shares"] = tuple(float(s) for s in p["shares"])
            if len(p["shares"]) != self.n_factors:
                raise DomainError("need one CES share per factor")
            if p["rho"] == 0 or p["rho"] > 1:
                raise DomainError("CES rho must be non-zero and <= 1")
            p.setdefault("nu", 1.0)
        else:
            if "alphas" not in p:
                raise DomainError(f"{self.family} needs 'alphas'")
            p["alphas"] = tuple(float(a) for a in p["alphas"])
            if len(p["alphas"]) != self.n_factors:
                raise DomainError("need one exponent per factor")
            if any(a < 0 for a in p["alphas"][:-1]):
                raise DomainError("exponents of non-incentive factors must be >= 0")
        for key, value in p.items():
            vals = value if isinstance(value, tuple) else (value,)
            if not all(math.isfinite(float(v)) for v in vals):
                raise DomainError(f"parameter {key!r} must be finite")
        object.__setattr__(self, "params", p)
        if self.family == "piecewise-vesting" and self.vesting_threshold is None:
            raise DomainError("piecewise-vesting needs a vesting_threshold")
        if self.vesting_threshold is not None:
            object.__setattr__(self, "vesting_threshold", float(self.vesting_threshold))

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.domain_box])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.domain_box])

    def scaled(self, c: float) -> "ProductionSpec":
        """Same function multiplied by ``c``."""
        p = dict(self.params)
        p["scale"] = p["scale"] * c
        return ProductionSpec(self.family, p, self.n_factors, self.domain_box, self.vesting_threshold)


def _spow(x, a):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        # a zero exponent drops the factor, including at x = 0
        return np.where(np.asarray(a) == 0, 1.0, np.sign(x) * np.abs(x) ** a)


def _values(spec: ProductionSpec, x: np.ndarray) -> np.ndarray:
    """Vectorized f over rows of ``x``; no box check."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    p = spec.params
    inc = x[:, -1]
    z = p["incentive_offset"] + p["incentive_coef"] * inc
    if spec.vesting_threshold is not None:
        z = np.where(inc < spec.vesting_threshold, p["incentive_offset"], z)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if spec.family == "ces-incentive":
            rho = p["rho"]
            shares = np.array(p["shares"])
            inputs = np.column_stack([x[:, :-1], z])
            inner = (_spow(inputs, rho) * shares).sum(axis=1)
            out = p["scale"] * _spow(inner, p["nu"] / rho)
        else:
            alphas = np.array(p["alphas"])
            out = p["scale"] * np.prod(_spow(x[:, :-1], alphas[:-1]), axis=1) * _spow(z, alphas[-1])
    return out


def evaluate(spec: ProductionSpec, x: Sequence[float]) -> float:
    """Output at factor vector ``x``, which must lie in the domain box."""
    arr = np.asarray(x, dtype=float)
    if arr.shape != (spec.n_factors,):
        raise DomainError(f"expected {spec.n_factors} factors, got shape {arr.shape}")
    if np.any(arr < spec.lower) or np.any(arr > spec.upper):
        raise DomainError("input lies outside the domain box")
    return float(_values(spec, arr)[0])


def marginals(spec: ProductionSpec, x: Sequence[float], fd_step: float):
    """Central-difference first and second partials ``(f_i, f_ii)`` at ``x``."""
    x = np.asarray(x, dtype=float)
    n = spec.n_factors
    eye = np.eye(n) * fd_step
    f0 = _values(spec, x)[0]
    fp = _values(spec, x + eye)
    fm = _values(spec, x - eye)
    return (fp - fm) / (2 * fd_step), (fp - 2 * f0 + fm) / fd_step ** 2


@dataclass
class CheckResult:
    verdict: str
    evidence: dict = field(default_factory=dict)


@dataclass
class AssumptionReport:
    verdicts: dict
    evidence: dict
    sample_count: int
    tolerance: float
    fd_step: float
    seed: int
    criteria: dict
    notes: tuple = (
        "holds means no counterexample among the sampled tests, not a proof",
        "convexity of V(y) is tested by sampled midpoints",
    )


# -- sampling -----------------------------------------------------------------

def sample_box(spec: ProductionSpec, n: int, seed: int, margin: float = 0.0) -> np.ndarray:
    """Scrambled Halton points in the box, optionally shrunk by ``margin`` of
    each side's width."""
    lo, hi = spec.lower, spec.upper
    width = hi - lo
    lo, hi = lo + margin * width, hi - margin * width
    u = qmc.Halton(d=spec.n_factors, scramble=True, seed=seed).random(n)
    return lo + u * (hi - lo)


def _pt(x) -> list:
    return [float(v) for v in np.asarray(x).ravel()]


# -- individual checks --------------------------------------------------------

def check_a1_nonneg(spec, samples, tol, **_):
    """Does some negative factor value in the box change f?"""
    worst = None
    for k in range(spec.n_factors):
        lo, hi = spec.domain_box[k]
        if lo >= 0:
            continue
        probe = samples.copy()
        neg_hi = min(hi, 0.0)
        # spread the k-th coordinate over the negative part of its range
        u = (samples[:, k] - lo) / (hi - lo)
        probe[:, k] = lo + u * (neg_hi - lo)
        probe = probe[probe[:, k] < 0]
        if len(probe) == 0:
            continue
        base = probe.copy()
        base[:, k] = 0.0
        diff = np.abs(_values(spec, probe) - _values(spec, base))
        diff = np.where(np.isnan(diff), np.inf, diff)
        j = int(np.argmax(diff))
        if diff[j] > tol and (worst is None or diff[j] > worst[0]):
            worst = (float(diff[j]), k, probe[j], base[j])
    if worst is None:
        return CheckResult(HOLDS, {"negative_factors": [k for k, (lo, _) in enumerate(spec.domain_box) if lo < 0]})
    gap, k, x, x0 = worst
    return CheckResult(VIOLATED, {
        "factor": k, "point": _pt(x), "f": float(_values(spec, x)[0]),
        "nonneg_point": _pt(x0), "f_nonneg": float(_values(spec, x0)[0]), "change": gap,
    })


def check_a2_marginals(spec, samples, tol, fd_step=1e-4, **_):
    """Sign of marginal products and the curvature regime per factor."""
    n = spec.n_factors
    fi = np.empty((len(samples), n))
    fii = np.empty((len(samples), n))
    for r, x in enumerate(samples):
        fi[r], fii[r] = marginals(spec, x, fd_step)
    finite = np.all(np.isfinite(fi) & np.isfinite(fii), axis=1)
    if not np.any(finite):
        return CheckResult(INCONCLUSIVE, {"reason": "no finite derivative estimates"})
    pts, fi, fii = samples[finite], fi[finite], fii[finite]
    regimes, evidence = [], {}
    violated = False
    for k in range(n):
        pos = float(np.mean(fii[:, k] > tol))
        flat = float(np.mean(np.abs(fii[:, k]) <= tol))
        neg = float(np.mean(fii[:, k] < -tol))
        if pos > INCREASING_FRACTION:
            regime = "increasing"
        elif flat > FLAT_FRACTION:
            regime = "flat"
        elif neg >= DIMINISHING_FRACTION:
            regime = "diminishing"
        else:
            regime = "mixed"
        regimes.append({"factor": k, "regime": regime, "frac_fii_pos": pos, "frac_fii_flat": flat,
                        "frac_fii_neg": neg, "min_fi": float(fi[:, k].min()),
                        "mean_fi": float(fi[:, k].mean()), "mean_fii": float(fii[:, k].mean())})
        if regime != "diminishing":
            violated = True
        j = int(np.argmin(fi[:, k]))
        if fi[j, k] < -tol:
            violated = True
            evidence.setdefault("negative_marginal", []).append(
                {"factor": k, "point": _pt(pts[j]), "f_i": float(fi[j, k])})
        if regime == "increasing":
            j = int(np.argmax(fii[:, k]))
            evidence.setdefault("increasing_marginal", []).append(
                {"factor": k, "point": _pt(pts[j]), "f_ii": float(fii[j, k])})
    evidence["regimes"] = regimes
    return CheckResult(VIOLATED if violated else HOLDS, evidence)


def check_a3_finite_single(spec, samples, tol, **_):
    """Finite and non-negative over the sampled box (corners included)."""
    lo, hi = spec.lower, spec.upper
    corners = np.array(np.meshgrid(*[[a, b] for a, b in zip(lo, hi)], indexing="ij")).reshape(spec.n_factors, -1).T
    pts = np.vstack([samples, corners])
    vals = _values(spec, pts)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        return CheckResult(VIOLATED, {"kind": "non-finite", "point": _pt(pts[j]), "f": str(vals[j])})
    j = int(np.argmin(vals))
    if vals[j] < -tol:
        return CheckResult(VIOLATED, {"kind": "negative", "point": _pt(pts[j]), "f": float(vals[j])})
    return CheckResult(HOLDS, {"min_f": float(vals[j]), "max_f": float(vals.max())})


def check_a4_zero_input(spec, samples, tol, **_):
    """f at the origin, plus the sign at an all-negative input if the box has one."""
    lo, hi = spec.lower, spec.upper
    evidence = {}
    if np.all(lo < 0):
        neg = np.minimum(hi, 0.0) * 0.5 + lo * 0.5
        fn = float(_values(spec, neg)[0])
        evidence["all_negative_point"] = _pt(neg)
        evidence["f_all_negative"] = fn
        evidence["all_negative_sign"] = ">= 0" if fn >= 0 else "< 0"
    if not (np.all(lo <= 0) and np.all(hi >= 0)):
        evidence["reason"] = "origin lies outside the domain box"
        return CheckResult(INCONCLUSIVE, evidence)
    f0 = float(_values(spec, np.zeros(spec.n_factors))[0])
    evidence["f_zero"] = f0
    if not math.isfinite(f0):
        return CheckResult(VIOLATED, evidence)
    evidence["variant"] = "f(0) = 0" if abs(f0) <= tol else ("f(0) < 0" if f0 < 0 else "f(0) > 0")
    return CheckResult(HOLDS if abs(f0) <= tol else VIOLATED, evidence)


def check_a5_monotone(spec, samples, tol, rng=None, **_):
    """Ordered pairs ``x >= x'``: single-axis steps and random joint steps."""
    rng = np.random.default_rng(0) if rng is None else rng
    hi = spec.upper
    lows, highs = [], []
    for k in range(spec.n_factors):
        up = samples.copy()
        up[:, k] = samples[:, k] + rng.uniform(0, 1, len(samples)) * (hi[k] - samples[:, k])
        lows.append(samples)
        highs.append(up)
    joint = samples + rng.uniform(0, 1, samples.shape) * (hi - samples)
    lows.append(samples)
    highs.append(joint)
    lo_pts, hi_pts = np.vstack(lows), np.vstack(highs)
    drop = _values(spec, lo_pts) - _values(spec, hi_pts)
    drop = np.where(np.isnan(drop), -np.inf, drop)
    j = int(np.argmax(drop))
    if drop[j] > tol:
        return CheckResult(VIOLATED, {
            "x_high": _pt(hi_pts[j]), "x_low": _pt(lo_pts[j]),
            "f_high": float(_values(spec, hi_pts[j])[0]), "f_low": float(_values(spec, lo_pts[j])[0]),
            "drop": float(drop[j]),
        })
    return CheckResult(HOLDS, {"pairs_tested": int(len(lo_pts)), "max_drop": float(drop[j])})


def _shrinking_gap(spec, x_mid, direction, fd_step):
    steps = [fd_step * 10.0 ** -k for k in range(4)]
    gaps = [abs(float(_values(spec, x_mid + h * direction)[0] - _values(spec, x_mid - h * direction)[0]))
            for h in steps]
    return steps, gaps


def _is_jump(gaps, tol) -> bool:
    return math.isfinite(gaps[-1]) and gaps[-1] > tol and gaps[-1] >= 0.5 * gaps[0]


def _find_jumps(spec, samples, tol, fd_step, rng):
    """Jump witnesses: a probe across the vesting threshold, then random
    interior slices refined by bisection.

    Each witness is ``(x_minus, x_plus, gap, source, x_limit)``; ``x_limit`` is
    the exact jump location when known (threshold probe) and ``None`` for
    bisected slices.
    """
    jumps = []
    k_inc = spec.n_factors - 1
    thr = spec.vesting_threshold
    lo, hi = spec.domain_box[k_inc]
    if thr is not None and lo < thr < hi:
        e = np.zeros(spec.n_factors)
        e[k_inc] = 1.0
        step = min(fd_step, 0.5 * (thr - lo), 0.5 * (hi - thr))
        best = None
        for x in samples:
            x_mid = x.copy()
            x_mid[k_inc] = thr
            steps, gaps = _shrinking_gap(spec, x_mid, e, step)
            if _is_jump(gaps, tol) and (best is None or gaps[-1] > best[2]):
                best = (x_mid - steps[-1] * e, x_mid + steps[-1] * e, gaps[-1], "vesting_threshold", x_mid)
        if best is not None:
            jumps.append(best)

    n_slices = min(len(samples), 64)
    a_pts = samples[rng.permutation(len(samples))[:n_slices]]
    b_pts = samples[rng.permutation(len(samples))[:n_slices]]
    t = np.linspace(0.0, 1.0, SLICE_POINTS)
    for a, b in zip(a_pts, b_pts):
        if np.allclose(a, b):
            continue
        line = a + t[:, None] * (b - a)
        vals = _values(spec, line)
        if not np.all(np.isfinite(vals)):
            continue
        j = int(np.argmax(np.abs(np.diff(vals))))
        left, right = line[j], line[j + 1]
        fl, fr = vals[j], vals[j + 1]
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (left + right)
            fm = float(_values(spec, mid)[0])
            if abs(fm - fl) >= abs(fr - fm):
                right, fr = mid, fm
            else:
                left, fl = mid, fm
        if abs(fr - fl) > 10 * tol:
            jumps.append((left, right, abs(fr - fl), "random_slice", None))
    return jumps


def check_a6_smooth(spec, samples, tol, fd_step=1e-4, rng=None, **_):
    """Continuity in the interior: a jump is a difference that does not
    shrink with the step."""
    rng = np.random.default_rng(0) if rng is None else rng
    jumps = _find_jumps(spec, samples, tol, fd_step, rng)
    if not jumps:
        return CheckResult(HOLDS, {"slices": int(min(len(samples), 64))})
    x_minus, x_plus, gap, source, _ = max(jumps, key=lambda j: j[2])
    return CheckResult(VIOLATED, {
        "x_minus": _pt(x_minus), "x_plus": _pt(x_plus),
        "f_minus": float(_values(spec, x_minus)[0]), "f_plus": float(_values(spec, x_plus)[0]),
        "gap": float(gap), "source": source, "n_jumps": len(jumps),
    })


def _levels(vals: np.ndarray) -> list[float]:
    finite = vals[np.isfinite(vals)]
    positive = finite[finite > 0]
    if len(positive) == 0:
        return []
    return [float(np.quantile(positive, q)) for q in LEVEL_QUANTILES]


def check_a7_vy_convex(spec, samples, tol, rng=None, **_):
    """Midpoints of sampled pairs inside V(y) must stay inside V(y)."""
    rng = np.random.default_rng(0) if rng is None else rng
    vals = _values(spec, samples)
    levels = _levels(vals)
    if not levels:
        return CheckResult(INCONCLUSIVE, {"reason": "f has no positive sampled values"})
    worst = None
    tests = 0
    for y in levels:
        members = samples[np.isfinite(vals) & (vals >= y)]
        if len(members) < 2:
            continue
        i = rng.integers(0, len(members), len(samples))
        j = rng.integers(0, len(members), len(samples))
        mids = 0.5 * (members[i] + members[j])
        short = y - _values(spec, mids)
        short = np.where(np.isnan(short), np.inf, short)
        tests += len(mids)
        k = int(np.argmax(short))
        if short[k] > tol and (worst is None or short[k] > worst[0]):
            worst = (float(short[k]), y, members[i[k]], members[j[k]], mids[k])
    if worst is None:
        return CheckResult(HOLDS, {"levels": levels, "midpoint_tests": tests})
    short, y, x1, x2, mid = worst
    return CheckResult(VIOLATED, {"level": y, "x1": _pt(x1), "x2": _pt(x2), "midpoint": _pt(mid),
                                  "f_midpoint": float(_values(spec, mid)[0]), "shortfall": short})


def check_a8_vy_closed(spec, samples, tol, fd_step=1e-4, rng=None, y_levels=None, **_):
    """Non-empty V(y) at each tested level, closedness at detected jumps, and
    runaway (convex) growth along the box diagonal."""
    rng = np.random.default_rng(0) if rng is None else rng
    vals = _values(spec, samples)
    levels = _levels(vals) + [float(y) for y in (y_levels or []) if y > 0]
    evidence = {"levels": levels}
    if not levels:
        return CheckResult(INCONCLUSIVE, {"reason": "f has no positive sampled values"})
    finite = vals[np.isfinite(vals)]
    top = float(finite.max()) if len(finite) else -math.inf
    empty = [y for y in levels if not top >= y]
    if empty:
        evidence["empty_levels"] = empty
        return CheckResult(VIOLATED, evidence)

    jumps = _find_jumps(spec, samples, tol, fd_step, rng)
    for x_minus, x_plus, _, source, x_limit in jumps:
        if x_limit is None:
            continue
        # V(y) is closed at a jump only if f at the jump point reaches the
        # larger one-sided value (upper semicontinuity)
        f_lim = float(_values(spec, x_limit)[0])
        for side in (x_minus, x_plus):
            f_side = float(_values(spec, side)[0])
            if f_side > f_lim + tol:
                evidence.update({"kind": "not_closed", "limit_point": _pt(x_limit), "f_limit": f_lim,
                                 "sequence_point": _pt(side), "f_sequence": f_side,
                                 "level": 0.5 * (f_lim + f_side), "source": source})
                return CheckResult(VIOLATED, evidence)
    evidence["unlocated_jumps"] = sum(1 for j in jumps if j[4] is None)

    t = np.linspace(0.0, 1.0, RAY_POINTS)
    ray = spec.lower + t[:, None] * (spec.upper - spec.lower)
    fr = _values(spec, ray)
    if np.all(np.isfinite(fr)):
        inc = np.diff(fr)
        runaway = bool(np.all(inc > 0) and np.all(np.diff(inc) > tol) and fr[-1] > max(levels))
        evidence["ray_growth_accelerating"] = runaway
        if runaway:
            evidence.update({"kind": "unbounded_returns", "ray_start": _pt(ray[0]), "ray_end": _pt(ray[-1]),
                             "f_along_ray": [float(v) for v in fr]})
            return CheckResult(VIOLATED, evidence)
    return CheckResult(HOLDS, evidence)


_CHECKS = {
    "A1": check_a1_nonneg,
    "A2": check_a2_marginals,
    "A3": check_a3_finite_single,
    "A4": check_a4_zero_input,
    "A5": check_a5_monotone,
    "A6": check_a6_smooth,
    "A7": check_a7_vy_convex,
    "A8": check_a8_vy_closed,
}


def audit(spec: ProductionSpec, n_samples: int = 256, tol: float = 1e-6, fd_step: float = 1e-4,
          seed: int = 0, y_levels: Optional[Sequence[float]] = None) -> AssumptionReport:
    """Run all eight checks and collect verdicts.

    Samples come from a scrambled Halton sequence seeded with ``seed``;
    derivative, slice and midpoint tests use the interior of the box (each
    side shrunk by 10% of its width). Each check gets its own generator
    derived from ``seed`` so checks do not influence each other.
    """
    if int(n_samples) != n_samples or n_samples < 100:
        raise ConfigurationError("n_samples must be an integer >= 100")
    if not (tol > 0 and fd_step > 0):
        raise ConfigurationError("tol and fd_step must be > 0")
    box = sample_box(spec, int(n_samples), seed)
    interior = sample_box(spec, int(n_samples), seed, margin=INTERIOR_MARGIN)
    children = np.random.SeedSequence(seed).spawn(len(CHECKS))
    verdicts, evidence = {}, {}
    for name, child in zip(CHECKS, children):
        pts = interior if name in ("A2", "A6") else box
        res = _CHECKS[name](spec, pts, tol, fd_step=fd_step, rng=np.random.default_rng(child),
                            y_levels=y_levels)
        verdicts[name] = res.verdict
        evidence[name] = res.evidence
    criteria = {
        "increasing_fraction": INCREASING_FRACTION,
        "flat_fraction": FLAT_FRACTION,
        "diminishing_fraction": DIMINISHING_FRACTION,
        "interior_margin": INTERIOR_MARGIN,
        "level_quantiles": list(LEVEL_QUANTILES),
        "jump_rule": "gap at smallest step > tol and >= half the gap at the largest step",
    }
    return AssumptionReport(verdicts, evidence, int(n_samples), float(tol), float(fd_step), int(seed), criteria)
