import math

import numpy as np
import pytest
from scipy.optimize import linprog

from l1pressure.certificates import (
    DualCertificate,
    cert_bound_unsigned,
    certificate_pipeline,
    coherence_phi_lower,
    coherence_report,
    mutual_coherence,
    smallest_eigenvalue,
    solve_certificate,
    spectral_phi_lower,
    verify_certificate,
)
from l1pressure.errors import (
    DimMismatch,
    EmptyInput,
    InvalidCertificate,
    OutOfRange,
    TooFewPoints,
    ZeroDelta,
    ZeroVector,
)
from l1pressure.pressure import PressureQuery, inner_signed_min, inner_unsigned_min, phi_k
from l1pressure.vectorspace import L1, L2, LINF, NormSpec, PointSet

ORTHO = np.eye(3) / math.sqrt(2)


def test_solve_certificate_examples():
    c = solve_certificate(ORTHO, L2)
    assert c.gamma == pytest.approx(1 / math.sqrt(6), abs=1e-12)
    assert c.f == pytest.approx(np.ones(3) / math.sqrt(3), abs=1e-9)
    u = np.array([0.6, 0.8])
    for n in (L1, L2, LINF, NormSpec.lp(3)):
        assert solve_certificate(np.array([u, -u]), n).gamma == 0.0
    ang = 2 * math.pi * np.arange(3) / 3
    tri = np.column_stack([np.cos(ang), np.sin(ang)])
    assert solve_certificate(tri, L2).gamma == 0.0
    with pytest.raises(EmptyInput):
        solve_certificate(np.zeros((0, 3)), L2)


@pytest.mark.parametrize("n", [L1, L2, LINF, NormSpec.lp(3)], ids=lambda n: n.tag)
def test_certificate_equals_hull_minimum(n):
    # Strong duality: the best level equals the min-norm value of the hull.
    rng = np.random.default_rng(30)
    for _ in range(20):
        k, d = int(rng.integers(1, 6)), int(rng.integers(1, 5))
        vs = rng.normal(size=(k, d)) + rng.normal(size=d)
        c = solve_certificate(vs, n)
        check = verify_certificate(c, vs)
        assert check.dual_norm_ok and check.level_ok
        tol = 1e-8 if n.kind != "lp" else 1e-5
        assert c.gamma == pytest.approx(inner_unsigned_min(vs, n).value, abs=tol)


def test_polyhedral_level_against_linprog():
    # Independent LP for max t, f(v_i) >= t, ||f||_inf <= 1 (the l1 case).
    rng = np.random.default_rng(31)
    for _ in range(20):
        k, d = int(rng.integers(2, 5)), int(rng.integers(2, 4))
        vs = rng.normal(size=(k, d)) + 1.5
        c = np.r_[np.zeros(d), -1.0]
        a_ub = np.hstack([-vs, np.ones((k, 1))])
        ref = linprog(c, a_ub, np.zeros(k), bounds=[(-1, 1)] * d + [(None, None)], method="highs")
        assert solve_certificate(vs, L1).gamma == pytest.approx(max(0.0, -ref.fun), abs=1e-9)


def test_verify_certificate_examples():
    c = solve_certificate(ORTHO, L2)
    chk = verify_certificate(c, ORTHO)
    assert chk.dual_norm_ok and chk.level_ok and chk.abs_level_ok
    bad = DualCertificate(np.zeros(2), 0.1, L2)
    assert not verify_certificate(bad, np.eye(2)).level_ok
    unit = DualCertificate(np.array([1.0, 0.0]), 1.0, L2)
    chk = verify_certificate(unit, np.array([[1.0, 0.0]]))
    assert chk.dual_norm_ok and chk.level_ok and chk.abs_level_ok
    with pytest.raises(DimMismatch):
        verify_certificate(unit, np.eye(3))


def test_cert_bound_unsigned():
    c = solve_certificate(ORTHO, L2)
    assert cert_bound_unsigned(c, ORTHO) <= inner_unsigned_min(ORTHO, L2).value + 1e-12
    zero = DualCertificate(np.zeros(3), 0.0, L2)
    assert cert_bound_unsigned(zero, ORTHO) == 0.0
    with pytest.raises(InvalidCertificate):
        cert_bound_unsigned(DualCertificate(np.array([2.0, 0, 0]), 0.5, L2), ORTHO)


def test_mutual_coherence():
    assert mutual_coherence(PointSet(np.eye(4))) == 0.0
    assert mutual_coherence(PointSet([[1.0, 2.0], [1.0, 2.0]])) == 1.0
    mu = mutual_coherence(PointSet(np.array([[1.0, 0.0], [1, 1] / np.sqrt(2)])))
    assert mu == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    with pytest.raises(ZeroVector):
        mutual_coherence(PointSet([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(TooFewPoints):
        mutual_coherence(PointSet([[1.0, 0.0]]))


def test_mutual_coherence_scale_invariant_and_matches_numpy():
    rng = np.random.default_rng(32)
    for _ in range(20):
        v = rng.normal(size=(int(rng.integers(2, 7)), 4))
        unit = v / np.linalg.norm(v, axis=1, keepdims=True)
        g = np.abs(unit @ unit.T)
        np.fill_diagonal(g, 0)
        mu = mutual_coherence(PointSet(v))
        assert mu == pytest.approx(g.max(), abs=1e-12)
        scaled = v * rng.uniform(0.1, 10, size=(v.shape[0], 1))
        assert mutual_coherence(PointSet(scaled)) == pytest.approx(mu, abs=1e-12)


def test_coherence_phi_lower():
    assert coherence_phi_lower(3, 0).phi_lower == pytest.approx(1 / math.sqrt(6), abs=1e-15)
    rep = coherence_phi_lower(4, 0.5)
    assert rep.phi_lower == 0.0 and rep.clamped
    assert coherence_phi_lower(2, 0.5).phi_lower == pytest.approx(math.sqrt(0.5) / (math.sqrt(2) * math.sqrt(3)))
    for m in range(1, 65):
        assert coherence_phi_lower(m, 0.0).phi_lower == pytest.approx(1 / math.sqrt(2 * m), abs=1e-12)
    with pytest.raises(OutOfRange):
        coherence_phi_lower(3, 1.5)


def test_smallest_eigenvalue_matches_numpy():
    rng = np.random.default_rng(33)
    for m in (1, 2, 3, 5, 6):
        b = rng.normal(size=(m, m))
        g = b @ b.T + 0.1 * np.eye(m)
        assert smallest_eigenvalue(g) == pytest.approx(np.linalg.eigvalsh(g)[0], rel=1e-8)


def test_spectral_phi_lower():
    for m in range(2, 7):
        assert spectral_phi_lower(PointSet(np.eye(m)), math.sqrt(2)) == pytest.approx(1 / math.sqrt(2 * m))
    assert spectral_phi_lower(PointSet([[1.0, 0, 0], [1.0, 0, 0], [0, 1.0, 0]]), 1.0) == 0.0
    sixty = np.array([[1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    assert spectral_phi_lower(PointSet(sixty), 1.0) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ZeroDelta):
        spectral_phi_lower(PointSet(np.eye(2)), 0.0)


def test_spectral_bound_below_signed_minimum():
    rng = np.random.default_rng(34)
    for _ in range(30):
        m, d = int(rng.integers(2, 6)), int(rng.integers(2, 6))
        pts = rng.normal(size=(m, d))
        delta = rng.uniform(0.5, 3)
        bound = spectral_phi_lower(PointSet(pts), delta)
        assert bound <= inner_signed_min(pts / delta, L2).value + 1e-8


def test_coherence_report_low_coherence_frames():
    rng = np.random.default_rng(35)
    done = 0
    while done < 15:
        m, d = int(rng.integers(2, 5)), 6
        v = rng.normal(size=(m, d))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        rep = coherence_report(PointSet(v))
        if rep.mu >= 1 / (m - 1):
            continue
        q = PressureQuery(PointSet(v), np.zeros(d), k_max=m)
        assert rep.lambda_min >= 1 - (m - 1) * rep.mu - 1e-12
        for k in range(1, m + 1):
            assert rep.phi_lower <= phi_k(q, k).value + 1e-8
        done += 1


def test_pipeline_orthonormal_confirms():
    q = PressureQuery(PointSet(np.eye(3)), np.zeros(3), k_max=3)
    cert = DualCertificate(np.ones(3) / math.sqrt(3), 1 / math.sqrt(6), L2)
    tuples = {1: (0,), 2: (0, 1), 3: (0, 1, 2)}
    rep = certificate_pipeline(q, tuples, {k: cert for k in tuples})
    assert rep.certified_lower_bound == pytest.approx(1 / math.sqrt(6))
    assert all(e.signed_claim == "confirmed" for e in rep.entries)
    assert not rep.signed_claim_violated
    assert rep.entries[2].signed_inner == pytest.approx(phi_k(q, 3).value)


def test_pipeline_two_point_gap_is_reported():
    u = np.array([1.0, 0.0])
    q = PressureQuery(PointSet(np.array([-u, u])), np.zeros(2), delta=1.0, k_max=2)
    cert = DualCertificate(u.copy(), 1.0, L2)
    rep = certificate_pipeline(q, {2: (0, 1)}, {2: cert})
    e = rep.entries[0]
    assert e.check.abs_level_ok and not e.check.level_ok
    assert e.signed_inner == 0.0
    assert e.signed_claim == "violated" and rep.signed_claim_violated
    assert not e.unsigned_certified and rep.certified_lower_bound is None


def test_pipeline_origin_in_hull_is_vacuous():
    ang = 2 * math.pi * np.arange(3) / 3
    tri = np.column_stack([np.cos(ang), np.sin(ang)])
    q = PressureQuery(PointSet(tri), np.zeros(2), k_max=3)
    cert = solve_certificate(q.normalized(), L2)
    rep = certificate_pipeline(q, {3: (0, 1, 2)}, {3: cert})
    assert rep.certified_lower_bound == 0.0
