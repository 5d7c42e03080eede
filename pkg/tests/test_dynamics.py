import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1pressure.dynamics import (
    MapSpec,
    apply,
    displacement_diameter_check,
    fixed_point_affine,
    minimal_displacement,
    orbit,
    sample_hull,
    two_point_convexity_check,
)
from l1pressure.errors import DimMismatch, EmptyInput, NotUnitBall, SingularSystem
from l1pressure.vectorspace import L1, L2, LINF, PointSet, norm, operator_norm, pairwise_diameter

CONTRACTION = MapSpec.affine([[0.5, 0.2], [0.1, 0.4]], [1.0, 1.0])
SHIFT = MapSpec.translation([0.2, 0.3])
IDENTITY = MapSpec.affine(np.eye(2), np.zeros(2))
SQUARE = np.array([[x, y] for x in np.linspace(0, 1, 5) for y in np.linspace(0, 1, 5)])


def nonexpansive_map(rng, d, n):
    a = rng.normal(size=(d, d))
    a *= rng.uniform(0.3, 1.0) / operator_norm(a, n)
    return MapSpec.affine(a, rng.normal(size=d), n)


def test_apply():
    assert apply(SHIFT, [0, 0]) == pytest.approx([0.2, 0.3])
    fix = fixed_point_affine(CONTRACTION)
    assert apply(CONTRACTION, fix) == pytest.approx(fix, abs=1e-12)
    assert np.array_equal(apply(IDENTITY, [1.5, -2.0]), [1.5, -2.0])
    with pytest.raises(DimMismatch):
        apply(CONTRACTION, [1.0, 2.0, 3.0])


def test_fixed_point_affine():
    x = fixed_point_affine(CONTRACTION)
    assert x == pytest.approx([2.85714, 2.14286], abs=1e-5)
    assert x == pytest.approx(np.linalg.solve(np.eye(2) - CONTRACTION.A, CONTRACTION.b), abs=1e-12)
    assert np.linalg.norm(apply(CONTRACTION, x) - x) <= 1e-9 * (1 + np.linalg.norm(CONTRACTION.b))
    b = np.array([0.3, -0.7])
    assert fixed_point_affine(MapSpec.affine(np.zeros((2, 2)), b)) == pytest.approx(b)
    with pytest.raises(SingularSystem):
        fixed_point_affine(MapSpec.affine(np.eye(2), [1.0, 0.0]))
    with pytest.raises(SingularSystem):
        fixed_point_affine(SHIFT)


def test_nonexpansive_flag():
    assert SHIFT.nonexpansive and CONTRACTION.nonexpansive
    assert not MapSpec.affine([[1, 0.1], [0, 1]], [0, 0], L2).nonexpansive
    assert MapSpec.affine([[1, 0.1], [0, 1]], [0, 0], LINF).nonexpansive is False
    assert MapSpec.affine([[0.9, 0.1], [0, 0.9]], [0, 0], LINF).nonexpansive


def test_orbit_translation():
    rec = orbit(SHIFT, [0, 0], 5)
    assert rec.hull_diameter == pytest.approx(1.80278, abs=1e-5)
    assert rec.iterates[-1] == pytest.approx([1.0, 1.5])
    assert len(set(rec.residuals.tolist())) == 1
    assert rec.residuals[0] == pytest.approx(math.sqrt(0.13), abs=1e-15)
    assert rec.hull_diameter == pairwise_diameter(PointSet(rec.iterates))


def test_orbit_krasnoselskii_converges():
    rec = orbit(CONTRACTION, [0, 0], 100, "krasnoselskii")
    assert rec.residuals[-1] <= 1e-6
    assert rec.iterates[-1] == pytest.approx([20 / 7, 15 / 7], abs=1e-6)
    assert rec.displacement_estimate == rec.residuals.min()


def test_orbit_zero_steps():
    rec = orbit(CONTRACTION, [1.0, 2.0], 0)
    assert rec.iterates.shape == (1, 2) and rec.hull_diameter == 0.0


def test_minimal_displacement():
    assert minimal_displacement(SHIFT, SQUARE) == pytest.approx(0.360555, abs=1e-6)
    assert minimal_displacement(IDENTITY, SQUARE) == 0.0
    fix = fixed_point_affine(CONTRACTION)
    near = fix + np.array([[-1e-3, -1e-3], [1e-3, 1e-3]])
    assert minimal_displacement(CONTRACTION, near) <= 1e-6
    assert minimal_displacement(CONTRACTION, [fix]) <= 1e-6
    # Away from the fixed point the samples themselves decide.
    far = np.array([[10.0, 10.0], [11.0, 12.0]])
    want = min(np.linalg.norm(x - apply(CONTRACTION, x)) for x in far)
    assert minimal_displacement(CONTRACTION, far) == pytest.approx(want)
    with pytest.raises(EmptyInput):
        minimal_displacement(CONTRACTION, [])


def test_displacement_diameter_check():
    chk = displacement_diameter_check(SHIFT, PointSet(SQUARE))
    assert chk.delta_est == pytest.approx(math.sqrt(0.13))
    assert chk.diam == pytest.approx(math.sqrt(2))
    assert chk.within_diameter and chk.within_orbit_hull
    chk = displacement_diameter_check(IDENTITY, PointSet(SQUARE))
    assert chk.delta_est == 0.0 and chk.within_diameter
    box = PointSet(np.array([[2.0, 1.5], [3.5, 3.0], [2.0, 3.0], [3.5, 1.5]]))
    chk = displacement_diameter_check(CONTRACTION, box)
    assert chk.delta_est == 0.0 and chk.within_diameter and chk.within_orbit_hull


def test_sample_hull():
    gens = PointSet(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert sample_hull(gens, 0, 1).shape == (0, 2)
    single = sample_hull(PointSet([[2.0, -1.0]]), 5, 3)
    assert np.allclose(single, [2.0, -1.0])
    pts = sample_hull(gens, 200, 7)
    assert np.all(pts >= 0) and np.all(pts.sum(axis=1) <= 1 + 1e-12)
    assert np.array_equal(pts, sample_hull(gens, 200, 7))
    assert not np.array_equal(pts, sample_hull(gens, 200, 8))


def test_two_point_convexity():
    e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    same = two_point_convexity_check(e1, e1, 0.5)
    assert same.holds and same.combination_norm == pytest.approx(1.0)
    anti = two_point_convexity_check(e1, -e1, 0.5)
    assert anti.holds and anti.combination_norm == 0.0 and anti.bound == 0.0
    right = two_point_convexity_check(e1, e2, 0.5)
    assert right.combination_norm == pytest.approx(math.sqrt(0.5))
    assert right.bound == pytest.approx(math.sqrt(0.5))
    assert right.holds
    off = two_point_convexity_check(e1, e2, 0.3)
    assert off.holds is None and not off.asserted
    with pytest.raises(NotUnitBall):
        two_point_convexity_check(2 * e1, e2, 0.5)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_midpoint_bound_on_random_unit_ball_pairs(seed):
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(2, 3))
    u *= rng.uniform(0, 1, size=(2, 1)) / np.linalg.norm(u, axis=1, keepdims=True)
    assert two_point_convexity_check(u[0], u[1], 0.5).holds


@pytest.mark.parametrize("n", [L1, L2, LINF], ids=lambda n: n.tag)
def test_nonexpansive_maps_properties(n):
    rng = np.random.default_rng(40)
    for _ in range(15):
        d = int(rng.integers(2, 5))
        m = nonexpansive_map(rng, d, n)
        assert m.nonexpansive
        x, y = rng.normal(size=(2, d)) * 3
        assert norm(apply(m, x) - apply(m, y), n) <= norm(x - y, n) + 1e-10
        rec = orbit(m, x, 40, "krasnoselskii")
        assert np.all(np.diff(rec.residuals) <= 1e-10)
        # Strict contraction: residuals decay at least like ((1 + |A|) / 2) ** n.
        q = (1 + operator_norm(m.A, n)) / 2
        assert rec.residuals[-1] <= 10 * rec.residuals[0] * q ** 40 + 1e-15


def test_translation_residuals_exact_in_every_norm():
    for n in (L1, L2, LINF):
        m = MapSpec.translation([0.1, -0.7, 0.3], n)
        rec = orbit(m, [0.3, 0.1, 5.0], 50, "plain")
        assert np.all(rec.residuals == rec.residuals[0])
        assert rec.residuals[0] == norm(m.b, n)
