"""Diametral l1-pressure and its unsigned and separated relatives.

For a finite candidate set ``C``, a base point ``x`` and a scale ``delta`` the
points are first normalised to ``(y - x) / delta``. Then

* the signed inner problem minimises ``||sum a_i v_i||`` over ``||a||_1 = 1``,
* the unsigned inner problem minimises it over the probability simplex,

and ``phi_k`` / ``psi_k`` take the supremum of the inner value over k-tuples
drawn from ``C``. ``pressure_P`` reports the values for ``k = 1..k_max`` and
their minimum, which is an upper bound on the infimum over all k.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DimMismatch,
    EmptyInput,
    LengthMismatch,
    MissingEta,
    OutOfRange,
    TooManyPoints,
    ZeroDelta,
)
from .minnorm import hull_min_norm, simplex_grid
from .vectorspace import NormSpec, PointSet, as_vector, norm_rows, pairwise_diameter

MAX_SIGN_PATTERN_K = 16
DEFAULT_BUDGET = 200_000
GRID_LIMIT = 5_000_000

SIGNED = "signed_l1_sphere"
UNSIGNED = "unsigned_simplex"
EXACT = "exact"
APPROXIMATE = "approximate"
LOWER_BOUND = "lower_bound"


@dataclass(frozen=True)
class PressureQuery:
    pointset: PointSet
    base: np.ndarray
    delta: float | None = None
    k_max: int = 1
    eta: float | None = None
    search_budget: int = DEFAULT_BUDGET
    seed: int = 0

    def __post_init__(self):
        base = as_vector(self.base, "base")
        if base.shape[0] != self.pointset.dim:
            raise DimMismatch("base point and point set differ in dimension")
        object.__setattr__(self, "base", base)
        if self.delta is not None and not (math.isfinite(self.delta) and self.delta > 0):
            raise ZeroDelta(f"delta must be positive, got {self.delta!r}")
        if self.k_max < 1:
            raise OutOfRange("k_max must be >= 1")
        if self.eta is not None and not 0.0 < self.eta <= 1.0:
            raise OutOfRange(f"eta must lie in (0, 1], got {self.eta!r}")
        if self.search_budget < 1:
            raise OutOfRange("search_budget must be positive")

    @property
    def norm(self) -> NormSpec:
        return self.pointset.norm

    @property
    def scale(self) -> float:
        """``delta``, or the diameter of the set together with the base point."""
        if self.delta is not None:
            return float(self.delta)
        both = np.vstack([self.pointset.points, self.base])
        d = pairwise_diameter(PointSet(both, self.norm))
        if d == 0.0:
            raise ZeroDelta("all points coincide with the base point")
        return d

    def normalized(self) -> np.ndarray:
        return normalize_points(self.pointset, self.base, self.scale).points


@dataclass
class InnerSolution:
    value: float
    coefficients: np.ndarray
    mode: str
    exactness: str


@dataclass
class KRecord:
    k: int
    value: float
    witness: tuple[int, ...]
    bound_kind: str
    admissible: bool = True
    coefficients: np.ndarray | None = None


@dataclass
class PressureReport:
    variant: str
    per_k: list[KRecord]
    truncated_inf: float
    exact_zero_rule_applied: bool = False

    @property
    def exact(self) -> bool:
        return all(r.bound_kind == EXACT for r in self.per_k)


@dataclass
class HypothesisResult:
    holds: bool
    min_value: float
    violator: int | None = None
    witness: np.ndarray | None = field(default=None, repr=False)


def normalize_points(pointset: PointSet, base, delta: float) -> PointSet:
    if not delta > 0:
        raise ZeroDelta("delta must be positive")
    base = as_vector(base, "base")
    if base.shape[0] != pointset.dim:
        raise DimMismatch("base point and point set differ in dimension")
    return pointset.with_points((pointset.points - base) / delta)


def evaluate_combination(vs, coeffs, n: NormSpec) -> float:
    vs = np.asarray(vs, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    if vs.ndim != 2 or coeffs.shape != (vs.shape[0],):
        raise LengthMismatch("need exactly one coefficient per vector")
    return float(norm_rows(coeffs @ vs, n))


def _as_vectors(vs) -> np.ndarray:
    arr = np.asarray(vs, dtype=float)
    if arr.size == 0:
        raise EmptyInput("no vectors given")
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return arr


def _collapse(vs: np.ndarray) -> np.ndarray | None:
    """Coefficients of an exact zero combination, when one is visible by inspection."""
    k = vs.shape[0]
    for i in range(k):
        if not np.any(vs[i]):
            a = np.zeros(k)
            a[i] = 1.0
            return a
    for i, j in itertools.combinations(range(k), 2):
        if np.array_equal(vs[i], vs[j]) or np.array_equal(vs[i], -vs[j]):
            a = np.zeros(k)
            a[i] = 0.5
            a[j] = -0.5 if np.array_equal(vs[i], vs[j]) else 0.5
            return a
    return None


def _sign_patterns(k: int) -> Iterable[np.ndarray]:
    # a and -a give the same norm, so the first sign stays +1.
    for tail in itertools.product((1.0, -1.0), repeat=k - 1):
        yield np.array((1.0,) + tail)


def _subgradient(y: np.ndarray, n: NormSpec) -> np.ndarray:
    if n.kind == "l1":
        return np.sign(y)
    if n.kind == "linf":
        g = np.zeros_like(y)
        j = int(np.argmax(np.abs(y)))
        g[j] = np.sign(y[j])
        return g
    if n.kind == "l2":
        size = np.linalg.norm(y)
        return y / size if size else np.zeros_like(y)
    from .minnorm import _lp_grad
    return _lp_grad(y, n.p)


def _signed_exact(vs: np.ndarray, n: NormSpec) -> InnerSolution:
    k = vs.shape[0]
    if k > MAX_SIGN_PATTERN_K:
        raise TooManyPoints(f"sign-pattern enumeration is capped at k = {MAX_SIGN_PATTERN_K}")
    best: InnerSolution | None = None
    exact = True
    for signs in _sign_patterns(k):
        h = hull_min_norm(signs[:, None] * vs, n)
        exact &= h.exact
        if best is None or h.value < best.value:
            best = InnerSolution(h.value, signs * h.weights, SIGNED, EXACT)
            if h.value == 0.0:
                break
    best.exactness = EXACT if exact else APPROXIMATE
    return best


def _signed_grid(vs: np.ndarray, n: NormSpec, resolution: int) -> InnerSolution:
    k = vs.shape[0]
    count = math.comb(resolution + k - 1, k - 1) * 2 ** (k - 1)
    if count > GRID_LIMIT:
        raise TooManyPoints(f"grid oracle would need {count} points")
    base = simplex_grid(k, resolution)
    best = None
    for signs in _sign_patterns(k):
        grid = base * signs
        vals = norm_rows(grid @ vs, n)
        i = int(np.argmin(vals))
        if best is None or vals[i] < best.value:
            best = InnerSolution(float(vals[i]), grid[i].copy(), SIGNED, APPROXIMATE)
    return best


def _signed_subgradient(vs: np.ndarray, n: NormSpec, seed: int, restarts: int = 8,
                        steps: int = 400) -> InnerSolution:
    k = vs.shape[0]
    rng = np.random.default_rng(seed)
    best_a, best_val = None, math.inf
    for _ in range(restarts):
        a = rng.standard_normal(k)
        a /= np.abs(a).sum()
        for it in range(steps):
            val = float(norm_rows(a @ vs, n))
            if val < best_val:
                best_a, best_val = a.copy(), val
            g = vs @ _subgradient(a @ vs, n)
            # Drop the radial component: scaling a does not leave the sphere.
            g -= (g @ a) / (a @ a) * a
            if not np.any(g):
                break
            a = a - 0.5 / math.sqrt(it + 1) * g / np.linalg.norm(g) * np.abs(a).max()
            total = np.abs(a).sum()
            if total == 0.0:
                break
            a /= total
    # Polish on the face of the sphere holding the best point.
    signs = np.where(best_a >= 0, 1.0, -1.0)
    h = hull_min_norm(signs[:, None] * vs, n)
    if h.value < best_val:
        best_a, best_val = signs * h.weights, h.value
    return InnerSolution(best_val, best_a, SIGNED, APPROXIMATE)


def inner_signed_min(vs, n: NormSpec, method: str = "exact_sign_patterns",
                     resolution: int = 200, seed: int = 0) -> InnerSolution:
    """Minimum of ``||sum a_i v_i||`` over the unit sphere of the l1 norm.

    ``exact_sign_patterns`` splits the sphere into its ``2**(k-1)`` faces (up to
    the symmetry ``a -> -a``); on each face the problem is a min-norm point over
    the hull of the sign-flipped vectors. ``grid_oracle`` enumerates coefficient
    vectors with entries ``i / resolution``; ``subgradient`` is a seeded local
    heuristic for large k. Both of the latter report ``approximate``.
    """
    vs = _as_vectors(vs)
    k = vs.shape[0]
    if k == 1:
        return InnerSolution(float(norm_rows(vs[0], n)), np.ones(1), SIGNED, EXACT)
    zero = _collapse(vs)
    if zero is not None:
        return InnerSolution(0.0, zero, SIGNED, EXACT)
    if method == "exact_sign_patterns":
        return _signed_exact(vs, n)
    if method == "grid_oracle":
        return _signed_grid(vs, n, resolution)
    if method == "subgradient":
        return _signed_subgradient(vs, n, seed)
    raise ValueError(f"unknown method {method!r}")


def inner_unsigned_min(vs, n: NormSpec) -> InnerSolution:
    """Minimum norm over convex combinations, i.e. the min-norm point of the hull."""
    vs = _as_vectors(vs)
    h = hull_min_norm(vs, n)
    return InnerSolution(h.value, h.weights, UNSIGNED, EXACT if h.exact else APPROXIMATE)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FPP_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence) -> list:
    workers = _threads()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _pick(records: Iterable[tuple[tuple[int, ...], InnerSolution]]):
    """Largest value; ties go to the lexicographically smallest tuple."""
    best = None
    for tup, sol in records:
        if best is None or sol.value > best[1].value or (
                sol.value == best[1].value and tup < best[0]):
            best = (tup, sol)
    return best


def _inner_for(signed: bool, n: NormSpec):
    if signed:
        return lambda vs: inner_signed_min(vs, n)
    return lambda vs: inner_unsigned_min(vs, n)


def _tuples(m: int, k: int, repetition: bool):
    if repetition:
        return itertools.combinations_with_replacement(range(m), k), math.comb(m + k - 1, k)
    return itertools.combinations(range(m), k), math.comb(m, k)


def _exhaustive(q: PressureQuery, k: int, signed: bool, repetition: bool) -> KRecord:
    pts = q.normalized()
    m = pts.shape[0]
    tuples, count = _tuples(m, k, repetition)
    if count > q.search_budget:
        raise BudgetExceeded(f"{count} tuples exceed the search budget {q.search_budget}")
    if count == 0:
        return KRecord(k, 0.0, (), EXACT, admissible=False)
    tuples = list(tuples)
    inner = _inner_for(signed, q.norm)
    sols = _map(lambda t: inner(pts[list(t)]), tuples)
    tup, sol = _pick(zip(tuples, sols))
    kind = EXACT if all(s.exactness == EXACT for s in sols) else APPROXIMATE
    return KRecord(k, sol.value, tup, kind, True, sol.coefficients)


def _search(q: PressureQuery, k: int, signed: bool, repetition: bool,
            restarts: int = 8) -> KRecord:
    pts = q.normalized()
    m = pts.shape[0]
    if not repetition and k > m:
        return KRecord(k, 0.0, (), EXACT, admissible=False)
    inner = _inner_for(signed, q.norm)
    rng = np.random.default_rng(q.seed)
    cache: dict[tuple[int, ...], InnerSolution] = {}

    def value(t):
        if t not in cache:
            cache[t] = inner(pts[list(t)])
        return cache[t]

    best = None
    for _ in range(restarts):
        if len(cache) >= q.search_budget:
            break
        start = rng.choice(m, size=k, replace=repetition or k > m)
        current = tuple(sorted(int(i) for i in start))
        while len(cache) < q.search_budget:
            neighbours = set()
            for pos in range(k):
                for j in range(m):
                    cand = list(current)
                    cand[pos] = j
                    cand = tuple(sorted(cand))
                    if cand != current and (repetition or len(set(cand)) == k):
                        neighbours.add(cand)
            neighbours = sorted(neighbours)[: max(0, q.search_budget - len(cache))]
            step = _pick((t, value(t)) for t in neighbours) if neighbours else None
            if step is None or step[1].value <= value(current).value:
                break
            current = step[0]
        cand = (current, value(current))
        best = cand if best is None else _pick([best, cand])
    tup, sol = best
    return KRecord(k, sol.value, tup, LOWER_BOUND, True, sol.coefficients)


def _resolve_mode(q: PressureQuery, k: int, mode: str, repetition: bool) -> str:
    if mode == "auto":
        m = len(q.pointset)
        count = math.comb(m + k - 1, k) if repetition else math.comb(m, k)
        return "exhaustive" if count <= q.search_budget else "search"
    if mode not in ("exhaustive", "search"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def phi_k(q: PressureQuery, k: int, mode: str = "exhaustive", repetition: bool = True) -> KRecord:
    """Signed pressure at level k: best k-tuple for the signed inner problem.

    ``exhaustive`` enumerates every multiset of k points and is exact;
    ``search`` runs seeded hill climbing over single-point swaps and returns
    a lower bound on the supremum.
    """
    if k < 1:
        raise OutOfRange("k must be >= 1")
    if _resolve_mode(q, k, mode, repetition) == "exhaustive":
        return _exhaustive(q, k, True, repetition)
    return _search(q, k, True, repetition)


def psi_k(q: PressureQuery, k: int, mode: str = "exhaustive", repetition: bool = False) -> KRecord:
    """Unsigned counterpart of :func:`phi_k` (convex weights instead of the l1 sphere).

    Tuples default to distinct points: with repeats allowed, the tuple
    ``(y, ..., y)`` makes the value at least ``max ||y - x|| / delta`` for
    every k, so the functional would never see collapse.
    """
    if k < 1:
        raise OutOfRange("k must be >= 1")
    if _resolve_mode(q, k, mode, repetition) == "exhaustive":
        return _exhaustive(q, k, False, repetition)
    return _search(q, k, False, repetition)


def _separated_tuples(dist: np.ndarray, k: int, cutoff: float, budget: int):
    """Index tuples (increasing) whose pairwise distances all reach ``cutoff``.

    Returns the tuples found and whether the enumeration finished within budget.
    """
    m = dist.shape[0]
    ok = dist >= cutoff
    found: list[tuple[int, ...]] = []

    def extend(chosen: list[int], start: int) -> bool:
        if len(chosen) == k:
            found.append(tuple(chosen))
            return len(found) < budget
        for j in range(start, m):
            if all(ok[i, j] for i in chosen):
                chosen.append(j)
                more = extend(chosen, j + 1)
                chosen.pop()
                if not more:
                    return False
        return True

    complete = extend([], 0)
    return found, complete


def phi_k_separated(q: PressureQuery, k: int) -> KRecord:
    """Signed pressure restricted to tuples with pairwise distances >= eta * delta."""
    if q.eta is None:
        raise MissingEta("the separated variant needs eta")
    if k < 1:
        raise OutOfRange("k must be >= 1")
    delta = q.scale
    pts = q.pointset.points
    m = pts.shape[0]
    dist = np.array([norm_rows(pts - pts[i], q.norm) for i in range(m)])
    # Relative slack so that distances equal to delta pass at eta = 1.
    cutoff = q.eta * delta * (1.0 - 1e-12)
    tuples, complete = _separated_tuples(dist, k, cutoff, q.search_budget)
    if not tuples:
        return KRecord(k, 0.0, (), EXACT if complete else LOWER_BOUND, admissible=False)
    normed = q.normalized()
    sols = _map(lambda t: inner_signed_min(normed[list(t)], q.norm), tuples)
    tup, sol = _pick(zip(tuples, sols))
    if not complete:
        kind = LOWER_BOUND
    else:
        kind = EXACT if all(s.exactness == EXACT for s in sols) else APPROXIMATE
    return KRecord(k, sol.value, tup, kind, True, sol.coefficients)


def pressure_P(q: PressureQuery, variant: str = "signed", mode: str = "auto") -> PressureReport:
    """Per-k values for ``k = 1..q.k_max`` and their minimum.

    For the signed variant on a set of m points every k > m is exactly zero:
    some point repeats and the weights (1/2, -1/2) on the repeat cancel.
    """
    if variant not in ("signed", "unsigned", "separated"):
        raise ValueError(f"unknown variant {variant!r}")
    m = len(q.pointset)
    rule = variant == "signed" and q.k_max > m
    records = []
    for k in range(1, q.k_max + 1):
        if variant == "signed":
            if k > m:
                coeffs = np.zeros(k)
                coeffs[:2] = (0.5, -0.5)
                records.append(KRecord(k, 0.0, (0,) * k, EXACT, True, coeffs))
            else:
                records.append(phi_k(q, k, mode))
        elif variant == "unsigned":
            records.append(psi_k(q, k, mode))
        else:
            records.append(phi_k_separated(q, k))
    return PressureReport(variant, records, min(r.value for r in records), rule)


def hypothesis_H_l1(q: PressureQuery, eps: float, k: int, tuples) -> HypothesisResult:
    """Check that no supplied k-tuple of points has a signed combination below ``eps``.

    Each tuple is a ``(k, dim)`` array of points; they are normalised with the
    query's base point and scale.
    """
    if not eps > 0:
        raise OutOfRange("eps must be positive")
    delta = q.scale
    low, where, witness = math.inf, None, None
    for idx, tup in enumerate(tuples):
        pts = np.asarray(tup, dtype=float).reshape(k, -1)
        sol = inner_signed_min((pts - q.base) / delta, q.norm)
        if sol.value < low:
            low = sol.value
            if sol.value < eps and where is None:
                where, witness = idx, sol.coefficients
    return HypothesisResult(where is None, low, where, witness)
