"""Catalogue of worked numerical examples, each recomputed and compared.

Every case rebuilds its inputs from scratch, runs the relevant routine and
compares the result with the printed value. Vector-valued cases pass when the
largest absolute deviation is within tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .certificates import coherence_report, solve_certificate, spectral_phi_lower
from .dynamics import MapSpec, fixed_point_affine, minimal_displacement, orbit
from .errors import UnknownCase
from .pressure import PressureQuery, evaluate_combination, inner_signed_min, phi_k, pressure_P
from .vectorspace import L1, L2, LINF, PointSet, operator_norm, sym_eigen_2x2


@dataclass(frozen=True)
class ReplicationCase:
    name: str
    expected: float | tuple[float, ...]
    computed: float | tuple[float, ...]
    tolerance: float
    passed: bool
    location: str

    @property
    def deviation(self) -> float:
        e = np.atleast_1d(np.asarray(self.expected, dtype=float))
        c = np.atleast_1d(np.asarray(self.computed, dtype=float))
        if e.shape != c.shape:
            return math.inf
        return float(np.max(np.abs(e - c)))


def _case(name, expected, computed, tol, where) -> ReplicationCase:
    as_out = lambda v: float(v) if np.ndim(v) == 0 else tuple(float(x) for x in v)
    expected, computed = as_out(expected), as_out(computed)
    probe = ReplicationCase(name, expected, computed, tol, False, where)
    return ReplicationCase(name, expected, computed, tol, probe.deviation <= tol, where)


def _orthonormal(m: int) -> PressureQuery:
    return PressureQuery(PointSet(np.eye(m), L2), np.zeros(m), k_max=m)


def _two_point_pressure():
    u = np.array([0.6, 0.8])
    q = PressureQuery(PointSet(np.array([-u, u]), L2), np.zeros(2), k_max=2)
    return 0.0, pressure_P(q).truncated_inf, 1e-12, "two-point diametral set, equal weights collapse"


def _two_point_weights():
    u, delta = np.array([1.0, 0.0]), 2.0
    vs = np.array([-delta * u, delta * u]) / delta
    got = [evaluate_combination(vs, a, L2) for a in ((0.4, 0.6), (0.2, 0.8))]
    return (0.2, 0.6), got, 1e-12, "two-point diametral set with delta = 2, weights (0.4, 0.6) and (0.2, 0.8)"


def _equilateral_phi3():
    ang = 2.0 * math.pi * np.arange(3) / 3.0
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    q = PressureQuery(PointSet(pts, L2), np.zeros(2), k_max=3)
    return 0.0, phi_k(q, 3).value, 1e-12, "equilateral triangle about its centre"


def _orthonormal_triple_phi3():
    return 1.0 / math.sqrt(6.0), phi_k(_orthonormal(3), 3).value, 1e-9, "orthonormal triple in R^3"


def _orthonormal_m_phi_m():
    ms = range(2, 9)
    want = [1.0 / math.sqrt(2.0 * m) for m in ms]
    got = [phi_k(_orthonormal(m), m).value for m in ms]
    return want, got, 1e-9, "orthonormal m-frame, m = 2..8"


def _orthonormal_triple_P_truncated():
    q = PressureQuery(PointSet(np.eye(3), L2), np.zeros(3), k_max=5)
    return 0.0, pressure_P(q).truncated_inf, 0.0, "orthonormal triple, levels k >= 4 vanish"


def _linf_collapse():
    exact10 = inner_signed_min(np.eye(10), LINF).value
    uniform100 = evaluate_combination(np.eye(100), np.full(100, 0.01), LINF)
    return (0.1, 0.01), (exact10, uniform100), 1e-12, "unit vectors under the sup norm, k = 10 and k = 100"


def _F_weight_samples():
    vs = np.eye(2)
    got = [evaluate_combination(vs, w, L2) for w in ((0.6, 0.4), (0.7, 0.3))]
    return (0.721, 0.761), got, 5e-4, "weighted selection samples (0.6, 0.4) and (0.7, 0.3)"


_CONTRACTION = MapSpec.affine([[0.5, 0.2], [0.1, 0.4]], [1.0, 1.0])
_SHIFT = MapSpec.translation([0.2, 0.3])


def _affine_fixed_point():
    return (2.857142857, 2.142857143), fixed_point_affine(_CONTRACTION), 1e-5, "affine contraction example"


def _translation_displacement():
    return 0.360555, minimal_displacement(_SHIFT, [[0.0, 0.0], [1.0, 1.0]]), 1e-6, "translation by (0.2, 0.3)"


def _translation_hull_diameter():
    return 1.80278, orbit(_SHIFT, [0.0, 0.0], 5).hull_diameter, 1e-5, "translation orbit after five steps"


def _norms_example3():
    a = np.array([[0.8, 0.3], [0.2, 0.7]])
    got = [operator_norm(a, n) for n in (L1, LINF, L2)]
    return (1.0, 1.1, 1.00662), got, 1e-5, "operator norms of [[0.8, 0.3], [0.2, 0.7]]"


def _eigen_example4():
    a = np.array([[1.0, 0.1], [0.0, 1.0]])
    hi, lo = sym_eigen_2x2(a.T @ a)
    return (1.105125, 0.904875, 1.05125), (hi, lo, math.sqrt(hi)), 1e-5, "shear [[1, 0.1], [0, 1]]"


def _coherence_zero_consistency():
    ps = PointSet(np.eye(3), L2)
    rep = coherence_report(ps)
    spectral = spectral_phi_lower(ps, math.sqrt(2.0))
    want = 1.0 / math.sqrt(6.0)
    return (want, want), (rep.phi_lower, spectral), 1e-12, "coherence and spectral bounds at mu = 0, m = 3"


def _dualcert_orthonormal():
    vs = _orthonormal(3).normalized()
    return 1.0 / math.sqrt(6.0), solve_certificate(vs, L2).gamma, 1e-8, "dual certificate on the orthonormal triple"


CATALOGUE: dict[str, Callable] = {
    "affine_fixed_point": _affine_fixed_point,
    "coherence_zero_consistency": _coherence_zero_consistency,
    "dualcert_orthonormal": _dualcert_orthonormal,
    "eigen_example4": _eigen_example4,
    "equilateral_phi3": _equilateral_phi3,
    "F_weight_samples": _F_weight_samples,
    "linf_collapse": _linf_collapse,
    "norms_example3": _norms_example3,
    "orthonormal_m_phi_m": _orthonormal_m_phi_m,
    "orthonormal_triple_P_truncated": _orthonormal_triple_P_truncated,
    "orthonormal_triple_phi3": _orthonormal_triple_phi3,
    "translation_displacement": _translation_displacement,
    "translation_hull_diameter": _translation_hull_diameter,
    "two_point_pressure": _two_point_pressure,
    "two_point_weights": _two_point_weights,
}


def case_names() -> list[str]:
    return sorted(CATALOGUE)


def run_case(name: str) -> ReplicationCase:
    try:
        build = CATALOGUE[name]
    except KeyError:
        raise UnknownCase(f"no replication case named {name!r}") from None
    expected, computed, tol, where = build()
    return _case(name, expected, computed, tol, where)


def run_all() -> list[ReplicationCase]:
    return [run_case(name) for name in case_names()]
