"""Orbits of affine and translation maps, minimal displacement and the
diameter bounds that tie them together."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimMismatch,
    EmptyInput,
    NotUnitBall,
    OutOfRange,
    SingularMatrix,
    SingularSystem,
    WrongShape,
)
from .vectorspace import (
    L2,
    NormSpec,
    PointSet,
    as_matrix,
    as_vector,
    gaussian_solve,
    modulus_convexity_l2,
    norm_rows,
    operator_norm,
    pairwise_diameter,
)

PLAIN = "plain"
KRASNOSELSKII = "krasnoselskii"


@dataclass(frozen=True)
class MapSpec:
    """``x -> A x + b`` (``kind="affine"``) or ``x -> x + b`` (``kind="translation"``)."""

    kind: str
    b: np.ndarray
    A: np.ndarray | None = None
    ambient_norm: NormSpec = field(default=L2)

    def __post_init__(self):
        b = as_vector(self.b, "b")
        object.__setattr__(self, "b", b)
        if self.kind == "affine":
            a = as_matrix(self.A, "A")
            if a.shape != (b.size, b.size):
                raise DimMismatch("A must be square and match b")
            object.__setattr__(self, "A", a)
        elif self.kind == "translation":
            if self.A is not None:
                raise WrongShape("a translation takes no matrix")
        else:
            raise ValueError(f"unknown map kind {self.kind!r}")

    @classmethod
    def affine(cls, A, b, norm: NormSpec = L2) -> "MapSpec":
        return cls("affine", b, A, norm)

    @classmethod
    def translation(cls, b, norm: NormSpec = L2) -> "MapSpec":
        return cls("translation", b, None, norm)

    @property
    def dim(self) -> int:
        return self.b.size

    @property
    def lipschitz(self) -> float | None:
        """Operator norm of the linear part; ``None`` for general lp norms."""
        if self.kind == "translation":
            return 1.0
        if self.ambient_norm.kind == "lp":
            return None
        return operator_norm(self.A, self.ambient_norm)

    @property
    def nonexpansive(self) -> bool:
        lip = self.lipschitz
        return lip is not None and lip <= 1.0 + 1e-12


@dataclass
class OrbitRecord:
    iterates: np.ndarray
    residuals: np.ndarray
    hull_diameter: float
    displacement_estimate: float
    scheme: str


def apply(m: MapSpec, x) -> np.ndarray:
    x = as_vector(x, "x")
    if x.size != m.dim:
        raise DimMismatch(f"map acts on R^{m.dim}, got a point in R^{x.size}")
    if m.kind == "translation":
        return x + m.b
    return m.A @ x + m.b


def fixed_point_affine(m: MapSpec) -> np.ndarray:
    """Solve ``(I - A) x = b``."""
    if m.kind != "affine":
        raise SingularSystem("a translation by b != 0 has no fixed point")
    try:
        return gaussian_solve(np.eye(m.dim) - m.A, m.b)
    except SingularMatrix as exc:
        raise SingularSystem("I - A is singular") from exc


def orbit(m: MapSpec, x0, steps: int, scheme: str = PLAIN) -> OrbitRecord:
    """Iterate ``x <- T x`` or the averaged step ``x <- (x + T x) / 2``.

    ``residuals[n]`` is ``||x_n - T x_n||`` for every stored iterate.
    """
    if steps < 0:
        raise OutOfRange("steps must be >= 0")
    if scheme not in (PLAIN, KRASNOSELSKII):
        raise ValueError(f"unknown scheme {scheme!r}")
    x = as_vector(x0, "x0")
    if x.size != m.dim:
        raise DimMismatch(f"map acts on R^{m.dim}, got a start in R^{x.size}")

    def residual(x, tx):
        # T x - x is b itself for a translation; subtracting would add rounding.
        if m.kind == "translation":
            return float(norm_rows(m.b, m.ambient_norm))
        return float(norm_rows(x - tx, m.ambient_norm))

    xs, res = [x], []
    for _ in range(steps):
        tx = apply(m, x)
        res.append(residual(x, tx))
        x = tx if scheme == PLAIN else 0.5 * (x + tx)
        xs.append(x)
    res.append(residual(x, apply(m, x)))
    iterates = np.array(xs)
    residuals = np.array(res)
    diam = pairwise_diameter(PointSet(iterates, m.ambient_norm))
    return OrbitRecord(iterates, residuals, diam, float(residuals.min()), scheme)


def minimal_displacement(m: MapSpec, region_samples) -> float:
    """Smallest ``||x - T x||`` over the samples, with exact answers where known.

    A translation moves every point by ``||b||``. An affine map whose fixed
    point lies inside the samples' bounding box has displacement zero there.
    """
    pts = np.asarray(region_samples, dtype=float)
    if pts.size == 0:
        raise EmptyInput("no region samples")
    pts = pts.reshape(-1, m.dim)
    if m.kind == "translation":
        return float(norm_rows(m.b, m.ambient_norm))
    try:
        fix = fixed_point_affine(m)
    except SingularSystem:
        fix = None
    if fix is not None and np.all(fix >= pts.min(axis=0)) and np.all(fix <= pts.max(axis=0)):
        return 0.0
    moved = pts @ m.A.T + m.b
    return float(norm_rows(pts - moved, m.ambient_norm).min())


@dataclass
class DisplacementCheck:
    delta_est: float
    diam: float
    within_diameter: bool
    within_orbit_hull: bool
    hull_diameters: list[float] = field(default_factory=list)


def displacement_diameter_check(m: MapSpec, region: PointSet, steps: int = 10) -> DisplacementCheck:
    """Check displacement <= diam(region) and <= 2 * diam(orbit hull) for each start.

    Every point of ``region`` is used as an orbit start; ``steps`` plain
    iterations build each orbit.
    """
    est = minimal_displacement(m, region.points)
    diam = pairwise_diameter(region)
    hulls = [orbit(m, x, steps).hull_diameter for x in region.points]
    ok_b = all(est <= 2.0 * h + 1e-9 for h in hulls)
    return DisplacementCheck(est, diam, est <= diam + 1e-9, ok_b, hulls)


def sample_hull(generators: PointSet, count: int, seed: int) -> np.ndarray:
    """``count`` random convex combinations with flat Dirichlet weights."""
    if count < 0:
        raise OutOfRange("count must be >= 0")
    rng = np.random.default_rng(seed)
    g = generators.points
    if count == 0:
        return np.zeros((0, g.shape[1]))
    w = rng.exponential(size=(count, g.shape[0]))
    w /= w.sum(axis=1, keepdims=True)
    return w @ g


@dataclass
class ConvexityCheck:
    combination_norm: float
    bound: float
    asserted: bool
    holds: bool | None


def two_point_convexity_check(u1, u2, lam: float) -> ConvexityCheck:
    """Compare ``||lam u1 + (1 - lam) u2||`` with ``1 - modulus(||u1 - u2||)``.

    Only the midpoint ``lam = 1/2`` is asserted; other weights just report the
    two numbers.
    """
    u1, u2 = as_vector(u1, "u1"), as_vector(u2, "u2")
    if u1.size != u2.size:
        raise DimMismatch("u1 and u2 differ in dimension")
    if not 0.0 <= lam <= 1.0:
        raise OutOfRange("lambda must lie in [0, 1]")
    if np.linalg.norm(u1) > 1.0 + 1e-12 or np.linalg.norm(u2) > 1.0 + 1e-12:
        raise NotUnitBall("both vectors must lie in the closed unit ball")
    gap = min(float(np.linalg.norm(u1 - u2)), 2.0)
    lhs = float(np.linalg.norm(lam * u1 + (1.0 - lam) * u2))
    rhs = 1.0 - modulus_convexity_l2(gap)
    asserted = lam == 0.5
    return ConvexityCheck(lhs, rhs, asserted, lhs <= rhs + 1e-12 if asserted else None)
