"""Transferable-utility coalition analysis for small games (2 to 6 players).

Coalitions are bitmasks over player indices ``0..n-1``. Values are held as
:class:`~fractions.Fraction` (floats convert exactly), so super-additivity,
core and Shapley verdicts carry no rounding error.

Core emptiness for ``n <= 4`` is decided exactly with the Bondareva-Shapley
theorem over all minimal balanced collections. For ``n`` of 5 or 6 the test
falls back to partition checks plus random feasibility search and the
verdict is flagged approximate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise DomainError(f"not a number: {x!r}") from None
    xf = float(x)
    if not math.isfinite(xf):
        raise DomainError(f"coalition values must be finite, got {x!r}")
    return Fraction(xf)


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for i in members:
        m |= 1 << int(i)
    return m


def members_of(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class CharacteristicFunction:
    """Coalition values ``v[mask]`` for all ``2**n`` coalitions, ``v[0] == 0``."""

    n: int
    v: tuple

    def __post_init__(self):
        if not 2 <= self.n <= 6:
            raise DomainError(f"need 2 <= n <= 6 players, got {self.n}")
        if len(self.v) != 1 << self.n:
            raise DomainError(f"need {1 << self.n} coalition values, got {len(self.v)}")
        vals = tuple(_as_fraction(x) for x in self.v)
        if vals[0] != 0:
            raise DomainError("the empty coalition must have value 0")
        object.__setattr__(self, "v", vals)

    @classmethod
    def from_function(cls, n: int, fn) -> "CharacteristicFunction":
        """Build from ``fn(frozenset_of_members)``; the empty set is forced to 0."""
        vals = [0] + [fn(members_of(m)) for m in range(1, 1 << n)]
        return cls(n, tuple(vals))

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping) -> "CharacteristicFunction":
        """Build from ``{iterable_of_members: value}``; missing coalitions are 0."""
        vals = [Fraction(0)] * (1 << n)
        for key, value in mapping.items():
            vals[mask_of(key)] = value
        return cls(n, tuple(vals))

    @property
    def grand(self) -> int:
        return (1 << self.n) - 1

    def value(self, members: Iterable[int]) -> Fraction:
        return self.v[mask_of(members)]

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.v]


# -- super-additivity ---------------------------------------------------------

def is_superadditive(cf: CharacteristicFunction):
    """Check ``v(S | T) >= v(S) + v(T)`` for every disjoint non-empty pair.

    Returns ``(True, None)`` or ``(False, (S, T))`` with the first violating
    pair in bitmask order (``S < T``), members as frozensets.
    """
    full = cf.grand
    for s in range(1, full + 1):
        for t in range(s + 1, full + 1):
            if s & t:
                continue
            if cf.v[s | t] < cf.v[s] + cf.v[t]:
                return False, (members_of(s), members_of(t))
    return True, None


# -- minimal balanced collections ---------------------------------------------

def _rank_and_solve(vectors: list[tuple[int, ...]], n: int):
    """Exact solve of ``sum_k w_k * vectors[k] = 1`` when the vectors are
    linearly independent; returns weights or ``None``."""
    k = len(vectors)
    # columns are coalitions; rows are players
    aug = [[Fraction(vectors[c][r]) for c in range(k)] + [Fraction(1)] for r in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        pivot = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None  # dependent columns
        aug[row], aug[pivot] = aug[pivot], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    # remaining rows must be consistent (0 = 0)
    for r in range(row, n):
        if aug[r][k] != 0:
            return None
    return [aug[i][k] for i in range(k)]


@lru_cache(maxsize=None)
def minimal_balanced_collections(n: int) -> tuple:
    """All minimal balanced collections of proper coalitions, with weights.

    A collection is minimal balanced exactly when its incidence vectors are
    linearly independent and admit strictly positive balancing weights, which
    are then unique. The trivial collection ``{N}`` is not included. Returns a
    tuple of ``(masks, weights)`` pairs.
    """
    if not 2 <= n <= 4:
        raise DomainError("exact minimal balanced collections are built for n in {2, 3, 4}")
    proper = list(range(1, (1 << n) - 1))
    vec = {m: tuple((m >> i) & 1 for i in range(n)) for m in proper}
    out = []
    for size in range(2, n + 1):
        for combo in itertools.combinations(proper, size):
            union = 0
            for m in combo:
                union |= m
            if union != (1 << n) - 1:
                continue
            weights = _rank_and_solve([vec[m] for m in combo], n)
            if weights is None or any(w <= 0 for w in weights):
                continue
            out.append((combo, tuple(weights)))
    return tuple(out)


# -- core ---------------------------------------------------------------------

@dataclass
class CoreVerdict:
    """Outcome of a core test.

    When ``empty`` is false, ``imputation`` is a core allocation. When true,
    ``collection``/``weights`` form a balanced collection whose weighted
    value exceeds ``v(N)`` (may be ``None`` in approximate mode if no
    certificate was found). ``exact`` is false for the sampling fallback.
    """

    empty: bool
    exact: bool
    imputation: Optional[tuple] = None
    collection: Optional[tuple] = None
    weights: Optional[tuple] = None
    excess: Optional[Fraction] = None


def in_core(cf: CharacteristicFunction, x: Sequence) -> bool:
    """Exact check of efficiency and every coalition inequality."""
    xs = [_as_fraction(xi) for xi in x]
    if len(xs) != cf.n or sum(xs) != cf.v[cf.grand]:
        return False
    for m in range(1, cf.grand):
        if sum(xs[i] for i in members_of(m)) < cf.v[m]:
            return False
    return True


def verify_certificate(cf: CharacteristicFunction, verdict: CoreVerdict) -> bool:
    """Re-check a verdict's certificate from scratch in exact arithmetic."""
    if not verdict.empty:
        return verdict.imputation is not None and in_core(cf, verdict.imputation)
    if verdict.collection is None:
        return False
    weights = [_as_fraction(w) for w in verdict.weights]
    if any(w < 0 for w in weights):
        return False
    for i in range(cf.n):
        if sum(w for m, w in zip(verdict.collection, weights) if m >> i & 1) != 1:
            return False
    total = sum(w * cf.v[m] for m, w in zip(verdict.collection, weights))
    return total > cf.v[cf.grand]


def _core_vertex(cf: CharacteristicFunction) -> Optional[tuple]:
    """Search the vertices of the core polytope for a feasible point.

    A vertex sets ``n - 1`` coalition constraints tight next to efficiency.
    The core is bounded, so it is non-empty iff one of these is feasible.
    """
    n = cf.n
    grand = cf.grand
    proper = list(range(1, grand))
    eff_row = [Fraction(1)] * n
    for combo in itertools.combinations(proper, n - 1):
        matrix = [[Fraction((m >> i) & 1) for i in range(n)] for m in combo] + [eff_row]
        rhs = [cf.v[m] for m in combo] + [cf.v[grand]]
        x = _solve_square(matrix, rhs)
        if x is not None and in_core(cf, x):
            return tuple(x)
    return None


def _solve_square(matrix, rhs):
    n = len(matrix)
    aug = [row[:] + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def sample_core_point(cf: CharacteristicFunction, n_samples: int = 20_000, seed: int = 0):
    """Rejection sampler over the imputation simplex.

    Draws ``x = v_i + (v(N) - sum v_i) * Dirichlet(1)`` and returns the first
    draw passing the exact core test, else ``None``. It may miss a non-empty
    core (thin cores are hard to hit) but never returns a non-core point.
    """
    singles = np.array([float(cf.v[1 << i]) for i in range(cf.n)])
    surplus = float(cf.v[cf.grand]) - singles.sum()
    if surplus < 0:
        return None
    rng = np.random.default_rng(seed)
    draws = singles + surplus * rng.dirichlet(np.ones(cf.n), size=n_samples)
    masks = np.array([[(m >> i) & 1 for i in range(cf.n)] for m in range(1, cf.grand)], dtype=float)
    needs = np.array([float(cf.v[m]) for m in range(1, cf.grand)])
    # float screen first, exact confirmation second
    ok = np.all(draws @ masks.T >= needs - 1e-12, axis=1)
    for idx in np.flatnonzero(ok):
        x = [Fraction(float(v)) for v in draws[idx]]
        x[-1] = cf.v[cf.grand] - sum(x[:-1])  # restore exact efficiency
        if in_core(cf, x):
            return tuple(x)
    return None


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def core_is_empty(cf: CharacteristicFunction, n_samples: int = 20_000, seed: int = 0) -> CoreVerdict:
    """Decide whether the core is empty.

    Exact for ``n <= 4``; for ``n`` in {5, 6} the verdict has ``exact=False``:
    an emptiness certificate from a partition or the all-``(n-1)`` collection
    is still exact evidence, but "empty" without certificate only means the
    sampler found nothing.
    """
    grand_value = cf.v[cf.grand]
    if cf.n <= 4:
        best = None
        for masks, weights in minimal_balanced_collections(cf.n):
            total = sum(w * cf.v[m] for m, w in zip(masks, weights))
            if total > grand_value and (best is None or total - grand_value > best[2]):
                best = (masks, weights, total - grand_value)
        if best is not None:
            return CoreVerdict(True, True, collection=best[0], weights=best[1], excess=best[2])
        x = _core_vertex(cf)
        if x is None:  # pragma: no cover - would contradict Bondareva-Shapley
            raise RuntimeError("balanced test says non-empty but no core vertex found")
        return CoreVerdict(False, True, imputation=x)

    point = sample_core_point(cf, n_samples=n_samples, seed=seed)
    if point is not None:
        return CoreVerdict(False, False, imputation=point)
    candidates = []
    for part in _partitions(list(range(cf.n))):
        if len(part) > 1:
            candidates.append((tuple(mask_of(b) for b in part), tuple(Fraction(1) for _ in part)))
    n = cf.n
    candidates.append((tuple(cf.grand & ~(1 << i) for i in range(n)),
                       tuple(Fraction(1, n - 1) for _ in range(n))))
    best = None
    for masks, weights in candidates:
        total = sum(w * cf.v[m] for m, w in zip(masks, weights))
        if total > grand_value and (best is None or total - grand_value > best[2]):
            best = (masks, weights, total - grand_value)
    if best is not None:
        return CoreVerdict(True, False, collection=best[0], weights=best[1], excess=best[2])
    return CoreVerdict(True, False)


# -- Shapley value ------------------------------------------------------------

def shapley_value(cf: CharacteristicFunction) -> tuple:
    """Exact Shapley value as a tuple of Fractions (subset-weight formula)."""
    n = cf.n
    fact = [math.factorial(k) for k in range(n + 1)]
    phi = []
    for i in range(n):
        bit = 1 << i
        total = Fraction(0)
        for s in range(1 << n):
            if s & bit:
                continue
            size = bin(s).count("1")
            weight = Fraction(fact[size] * fact[n - size - 1], fact[n])
            total += weight * (cf.v[s | bit] - cf.v[s])
        phi.append(total)
    return tuple(phi)
