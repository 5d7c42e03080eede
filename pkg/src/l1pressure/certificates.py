"""Dual-functional certificates and coherence / Gram-spectrum lower bounds.

A certificate is a functional ``f`` of dual norm at most one with
``f(v_i) >= gamma`` for every vector in a tuple. For any convex weights ``w``
this gives ``||sum w_i v_i|| >= f(sum w_i v_i) >= gamma``, so ``gamma`` is a
valid lower bound on the unsigned inner minimum. The stronger signed reading
(``|f(v_i)| >= gamma`` bounding the signed minimum) does not follow in
general; :func:`certificate_pipeline` checks it numerically instead of
assuming it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimMismatch,
    EmptyInput,
    InvalidCertificate,
    NonEuclideanNorm,
    OutOfRange,
    SingularMatrix,
    TooFewPoints,
    ZeroDelta,
    ZeroVector,
)
from .lp import solve_lp
from .minnorm import _lp_grad
from .pressure import PressureQuery, inner_signed_min, inner_unsigned_min
from .vectorspace import (
    NormSpec,
    PointSet,
    as_vector,
    gaussian_solve,
    gram,
    norm_rows,
    sym_eigen_2x2,
)

TOL = 1e-9
UNSIGNED_VALID = "unsigned_valid"
SIGNED_CLAIMED = "signed_claimed"


@dataclass
class DualCertificate:
    f: np.ndarray
    gamma: float
    norm_of_f: NormSpec
    scope: str = UNSIGNED_VALID


@dataclass
class CertificateCheck:
    dual_norm_ok: bool
    level_ok: bool
    abs_level_ok: bool


@dataclass
class CoherenceReport:
    mu: float
    m: int
    phi_lower: float
    clamped: bool
    lambda_min: float | None = None


@dataclass
class PipelineEntry:
    k: int
    tuple: tuple[int, ...]
    gamma: float
    check: CertificateCheck
    unsigned_certified: bool
    signed_inner: float
    signed_claim: str  # "confirmed" | "violated" | "not_applicable"


@dataclass
class PipelineReport:
    entries: list[PipelineEntry] = field(default_factory=list)

    @property
    def certified_lower_bound(self) -> float | None:
        """Smallest certified level over the supplied k (a bound on each unsigned value)."""
        good = [e.gamma for e in self.entries if e.unsigned_certified]
        return min(good) if good and len(good) == len(self.entries) else None

    @property
    def signed_claim_violated(self) -> bool:
        return any(e.signed_claim == "violated" for e in self.entries)


def _vectors(vs) -> np.ndarray:
    arr = np.asarray(vs, dtype=float)
    if arr.size == 0:
        raise EmptyInput("no vectors given")
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return arr


def _polyhedral_certificate(vs: np.ndarray, n: NormSpec) -> np.ndarray:
    """Maximise t subject to f(v_i) >= t and a polyhedral dual-norm ball."""
    m, d = vs.shape
    # variables: f_plus (d), f_minus (d), t
    c = np.zeros(2 * d + 1)
    c[-1] = -1.0
    level = np.hstack([-vs, vs, np.ones((m, 1))])
    if n.kind == "l1":
        # dual ball is linf: f_plus_j + f_minus_j <= 1
        ball = np.hstack([np.eye(d), np.eye(d), np.zeros((d, 1))])
        ball_rhs = np.ones(d)
    else:
        # dual ball is l1: sum(f_plus + f_minus) <= 1
        ball = np.concatenate([np.ones(2 * d), [0.0]]).reshape(1, -1)
        ball_rhs = np.ones(1)
    res = solve_lp(c, np.vstack([level, ball]), np.concatenate([np.zeros(m), ball_rhs]))
    return res.x[:d] - res.x[d:2 * d]


def solve_certificate(vs, n: NormSpec) -> DualCertificate:
    """Best certificate level ``max{t : ||f||_* <= 1, f(v_i) >= t}``.

    Polyhedral norms are solved as a linear programme. For ``l2`` and ``lp``
    the optimum equals the min-norm point of the hull, and ``f`` is the unit
    functional norming that point.
    """
    vs = _vectors(vs)
    dual = n.dual()
    if n.is_polyhedral:
        f = _polyhedral_certificate(vs, n)
    else:
        h = inner_unsigned_min(vs, n)
        scale = float(norm_rows(vs, n).max())
        if h.value <= 1e-14 * max(scale, 1.0):
            f = np.zeros(vs.shape[1])
        else:
            p = h.coefficients @ vs
            f = p / np.linalg.norm(p) if n.kind == "l2" else _lp_grad(p, n.p)
    size = float(norm_rows(f, dual))
    if size > 1.0:
        f = f / size
    gamma = float(np.min(vs @ f))
    if gamma <= 0.0:
        f, gamma = np.zeros(vs.shape[1]), 0.0
    return DualCertificate(f, gamma, dual, UNSIGNED_VALID)


def verify_certificate(c: DualCertificate, vs) -> CertificateCheck:
    vs = _vectors(vs)
    f = as_vector(c.f, "f")
    if vs.shape[1] != f.shape[0]:
        raise DimMismatch("certificate and vectors differ in dimension")
    vals = vs @ f
    return CertificateCheck(
        dual_norm_ok=bool(norm_rows(f, c.norm_of_f) <= 1.0 + TOL),
        level_ok=bool(np.all(vals >= c.gamma - TOL)),
        abs_level_ok=bool(np.all(np.abs(vals) >= c.gamma - TOL)),
    )


def cert_bound_unsigned(c: DualCertificate, vs) -> float:
    check = verify_certificate(c, vs)
    if not (check.dual_norm_ok and check.level_ok):
        raise InvalidCertificate("certificate fails its dual-norm or level check")
    return float(c.gamma)


def mutual_coherence(ps: PointSet) -> float:
    """Largest ``|<v_i, v_j>| / (||v_i|| ||v_j||)`` over pairs ``i < j``."""
    if ps.norm.kind != "l2":
        raise NonEuclideanNorm("coherence is defined for the Euclidean norm")
    v = ps.points
    m = v.shape[0]
    if m < 2:
        raise TooFewPoints("coherence needs at least two vectors")
    norms = np.sqrt(np.einsum("ij,ij->i", v, v))
    if np.any(norms == 0.0):
        raise ZeroVector("coherence is undefined for a zero vector")
    mu = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            mu = max(mu, abs(float(v[i] @ v[j])) / (norms[i] * norms[j]))
    # Parallel vectors should read as exactly coherent despite rounding.
    return 1.0 if mu > 1.0 - 1e-12 else mu


def coherence_phi_lower(m: int, mu: float) -> CoherenceReport:
    """Closed-form lower bound ``sqrt(max(0, 1-(m-1)mu)) / (sqrt(m) sqrt(2(1+mu)))``."""
    if m < 1 or not 0.0 <= mu <= 1.0:
        raise OutOfRange(f"need m >= 1 and mu in [0, 1], got m={m}, mu={mu}")
    slack = 1.0 - (m - 1) * mu
    clamped = slack <= 0.0
    phi = math.sqrt(max(0.0, slack)) / (math.sqrt(m) * math.sqrt(2.0 * (1.0 + mu)))
    return CoherenceReport(mu, m, phi, clamped)


def smallest_eigenvalue(g, tol: float = 1e-10, max_iter: int = 10000, seed: int = 0) -> float:
    """Smallest eigenvalue of a symmetric PSD matrix; 0 when it is singular.

    Uses the closed form up to 2x2 and inverse power iteration otherwise.
    """
    g = np.asarray(g, dtype=float)
    m = g.shape[0]
    if m == 1:
        return float(g[0, 0])
    if m == 2:
        return sym_eigen_2x2(g)[1]
    v = np.random.default_rng(seed).standard_normal(m)
    v /= np.linalg.norm(v)
    rq, calm = float(v @ g @ v), 0
    for _ in range(max_iter):
        try:
            w = gaussian_solve(g, v)
        except SingularMatrix:
            return 0.0
        v = w / np.linalg.norm(w)
        new = float(v @ g @ v)
        change = abs(new - rq) / max(abs(new), np.finfo(float).tiny)
        rq = new
        calm = calm + 1 if change < tol else 0
        if calm >= 3:
            break
    return rq


def spectral_phi_lower(ps: PointSet, delta: float) -> float:
    """``sqrt(lambda_min(G)) / (sqrt(m) * delta)`` for the Gram matrix of the points."""
    if not delta > 0:
        raise ZeroDelta("delta must be positive")
    g = gram(ps)
    lam = smallest_eigenvalue(g)
    if lam <= 1e-12 * max(1.0, float(np.max(np.abs(g)))):
        return 0.0
    return math.sqrt(lam) / (math.sqrt(len(ps)) * delta)


def coherence_report(ps: PointSet) -> CoherenceReport:
    """Coherence bound plus the Gram spectrum of the unit-normalised vectors."""
    mu = mutual_coherence(ps)
    rep = coherence_phi_lower(len(ps), mu)
    unit = ps.points / np.sqrt(np.einsum("ij,ij->i", ps.points, ps.points))[:, None]
    rep.lambda_min = max(0.0, smallest_eigenvalue(gram(ps.with_points(unit))))
    return rep


def certificate_pipeline(q: PressureQuery, per_k_tuples: Mapping[int, Sequence[int]],
                         per_k_certs: Mapping[int, DualCertificate]) -> PipelineReport:
    """Verify one certificate per level k and compare with the signed inner value.

    ``signed_claim`` is ``confirmed`` or ``violated`` when the certificate meets
    ``|f(v_i)| >= gamma`` (the hypothesis of the signed reading) and
    ``not_applicable`` otherwise.
    """
    pts = q.normalized()
    report = PipelineReport()
    for k in sorted(per_k_tuples):
        idx = tuple(int(i) for i in per_k_tuples[k])
        if len(idx) != k:
            raise DimMismatch(f"tuple for k={k} has {len(idx)} entries")
        vs = pts[list(idx)]
        cert = per_k_certs[k]
        check = verify_certificate(cert, vs)
        signed = inner_signed_min(vs, q.norm).value
        if check.dual_norm_ok and check.abs_level_ok:
            claim = "confirmed" if signed >= cert.gamma - TOL else "violated"
        else:
            claim = "not_applicable"
        report.entries.append(PipelineEntry(
            k, idx, float(cert.gamma), check,
            check.dual_norm_ok and check.level_ok, signed, claim))
    return report
