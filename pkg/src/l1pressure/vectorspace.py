"""Small dense vector and matrix numerics.

Vectors are 1-D float64 numpy arrays and matrices are 2-D float64 arrays.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    BadSampleCount,
    DimMismatch,
    EmptyInput,
    NonEuclideanNorm,
    NonFiniteInput,
    NotSymmetric,
    OutOfRange,
    SingularMatrix,
    UnsupportedNorm,
    WrongShape,
)

_KINDS = ("l1", "l2", "linf", "lp")


@dataclass(frozen=True)
class NormSpec:
    """Which norm measures lengths: ``l1``, ``l2``, ``linf`` or ``lp`` with ``1 < p < inf``."""

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedNorm(f"unknown norm kind {self.kind!r}")
        if self.kind == "lp":
            if self.p is None or not math.isfinite(self.p) or self.p <= 1:
                raise OutOfRange(f"lp norm needs finite p > 1, got {self.p!r}")
        elif self.p is not None:
            raise UnsupportedNorm(f"norm kind {self.kind!r} takes no exponent")

    @classmethod
    def l1(cls) -> "NormSpec":
        return cls("l1")

    @classmethod
    def l2(cls) -> "NormSpec":
        return cls("l2")

    @classmethod
    def linf(cls) -> "NormSpec":
        return cls("linf")

    @classmethod
    def lp(cls, p: float) -> "NormSpec":
        p = float(p)
        if p == 2.0:
            return cls("l2")
        return cls("lp", p)

    @classmethod
    def parse(cls, tag: str) -> "NormSpec":
        """Parse ``"l1" | "l2" | "linf" | "lp:<p>"``."""
        tag = tag.strip().lower()
        if tag in ("l1", "l2", "linf"):
            return cls(tag)
        if tag.startswith("lp:"):
            try:
                p = float(tag[3:])
            except ValueError as exc:
                raise UnsupportedNorm(f"bad norm tag {tag!r}") from exc
            return cls.lp(p)
        raise UnsupportedNorm(f"bad norm tag {tag!r}")

    @property
    def tag(self) -> str:
        if self.kind == "lp":
            return f"lp:{int(self.p)}" if float(self.p).is_integer() else f"lp:{self.p!r}"
        return self.kind

    @property
    def is_polyhedral(self) -> bool:
        return self.kind in ("l1", "linf")

    def dual(self) -> "NormSpec":
        return dual_norm_spec(self)

    def __str__(self):
        return self.tag


L1 = NormSpec.l1()
L2 = NormSpec.l2()
LINF = NormSpec.linf()


def dual_norm_spec(n: NormSpec) -> NormSpec:
    if n.kind == "l1":
        return LINF
    if n.kind == "linf":
        return L1
    if n.kind == "l2":
        return L2
    return NormSpec.lp(n.p / (n.p - 1.0))


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise WrongShape(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return arr


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise WrongShape(f"{name} must be a non-empty 2-D array")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class PointSet:
    """A finite, non-empty list of points in R^dim with the norm that measures them."""

    points: np.ndarray
    norm: NormSpec = field(default=L2)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1 and pts.size:
            pts = pts.reshape(1, -1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise EmptyInput("a point set needs at least one point of dimension >= 1")
        if not np.all(np.isfinite(pts)):
            raise NonFiniteInput("point set has non-finite entries")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def with_points(self, points) -> "PointSet":
        return PointSet(points, self.norm)


def norm_rows(x: np.ndarray, n: NormSpec) -> np.ndarray:
    """Norm of each row of ``x`` (or of ``x`` itself when 1-D)."""
    a = np.abs(np.asarray(x, dtype=float))
    if n.kind == "l1":
        return a.sum(axis=-1)
    if n.kind == "linf":
        return a.max(axis=-1)
    if n.kind == "l2":
        return np.sqrt(np.einsum("...i,...i->...", a, a))
    # Scale by the largest entry so large p cannot overflow.
    top = a.max(axis=-1, keepdims=True)
    safe = np.where(top > 0, top, 1.0)
    return np.squeeze(top, -1) * np.sum((a / safe) ** n.p, axis=-1) ** (1.0 / n.p)


def norm(v, n: NormSpec) -> float:
    return float(norm_rows(as_vector(v), n))


def gram(ps: PointSet) -> np.ndarray:
    if ps.norm.kind != "l2":
        raise NonEuclideanNorm("the Gram matrix needs the Euclidean norm")
    g = ps.points @ ps.points.T
    return 0.5 * (g + g.T)


def _check_symmetric(m: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric")


def sym_eigen_2x2(m) -> tuple[float, float]:
    """Both eigenvalues of a symmetric 2x2 matrix, largest first, by the quadratic formula."""
    m = as_matrix(m)
    if m.shape != (2, 2):
        raise WrongShape(f"expected a 2x2 matrix, got {m.shape}")
    _check_symmetric(m)
    a, b, c = m[0, 0], 0.5 * (m[0, 1] + m[1, 0]), m[1, 1]
    root = math.sqrt((a - c) ** 2 + 4.0 * b * b)
    return (a + c + root) / 2.0, (a + c - root) / 2.0


class PowerResult(NamedTuple):
    value: float
    vector: np.ndarray
    iterations: int
    converged: bool


def _unit_start(n: int, seed: int) -> np.ndarray:
    v = np.random.default_rng(seed).standard_normal(n)
    return v / np.linalg.norm(v)


def power_iteration(m, tol: float = 1e-12, max_iter: int = 10000, seed: int = 0) -> PowerResult:
    """Dominant eigenvalue of a symmetric PSD matrix.

    Stops once the relative change of the Rayleigh quotient stays below
    ``tol`` for three consecutive steps. A run that hits ``max_iter`` returns
    its last estimate with ``converged=False``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise WrongShape("power iteration needs a square matrix")
    _check_symmetric(m)
    v = _unit_start(m.shape[0], seed)
    rq = float(v @ m @ v)
    calm = 0
    for it in range(1, max_iter + 1):
        w = m @ v
        size = np.linalg.norm(w)
        if size == 0.0:
            return PowerResult(0.0, v, it, True)
        v = w / size
        new_rq = float(v @ m @ v)
        change = abs(new_rq - rq) / max(abs(new_rq), np.finfo(float).tiny)
        rq = new_rq
        calm = calm + 1 if change < tol else 0
        if calm >= 3:
            return PowerResult(rq, v, it, True)
    return PowerResult(rq, v, max_iter, False)


def operator_norm(a, n: NormSpec) -> float:
    a = as_matrix(a)
    if n.kind == "l1":
        return float(np.abs(a).sum(axis=0).max())
    if n.kind == "linf":
        return float(np.abs(a).sum(axis=1).max())
    if n.kind == "l2":
        ata = a.T @ a
        ata = 0.5 * (ata + ata.T)
        if ata.shape == (2, 2):
            top = sym_eigen_2x2(ata)[0]
        else:
            top = power_iteration(ata).value
        return math.sqrt(max(top, 0.0))
    raise UnsupportedNorm("operator norms are only computed for l1, l2 and linf")


def gaussian_solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting."""
    a = as_matrix(a, "A").copy()
    b = as_vector(b, "b").copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise WrongShape("A must be square")
    if b.shape[0] != n:
        raise DimMismatch("b does not match A")
    threshold = 1e-12 * float(np.max(np.abs(a)))
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[piv, col]) <= threshold or a[piv, col] == 0.0:
            raise SingularMatrix(f"pivot {col} is below the singularity threshold")
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        factors = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] -= np.outer(factors, a[col, col:])
        b[col + 1:] -= factors * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x


def simpson(values: Sequence[float], h: float) -> float:
    """Composite Simpson rule with weights (1, 4, 2, ..., 4, 1) * h / 3."""
    y = np.asarray(values, dtype=float)
    if y.ndim != 1 or y.size < 3 or y.size % 2 == 0:
        raise BadSampleCount("Simpson's rule needs an odd number (>= 3) of samples")
    w = np.ones(y.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * (w @ y))


def pairwise_diameter(ps: PointSet) -> float:
    pts = ps.points
    best = 0.0
    for i in range(len(pts) - 1):
        best = max(best, float(norm_rows(pts[i + 1:] - pts[i], ps.norm).max()))
    return best


def modulus_convexity_l2(eps: float) -> float:
    """Euclidean modulus of convexity ``1 - sqrt(1 - eps**2 / 4)``."""
    if not 0.0 <= eps <= 2.0:
        raise OutOfRange(f"eps must lie in [0, 2], got {eps!r}")
    return 1.0 - math.sqrt(1.0 - eps * eps / 4.0)
