import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import subspace_angles

from oracles import circumradius_sq_oracle, volume_sq_oracle
from slicechroma.geom import (
    BackingMismatchError,
    DegenerateSimplexError,
    EmptyAttachedSphereError,
    ExactPoint,
    FloatPoint,
    GeometryError,
    Simplex,
    SliceSpec,
    attached_sphere,
    attached_sphere_points,
    cayley_menger_det,
    circumsphere,
    cm_volume_factor,
    equator,
    equator_points,
    inradius,
    q11_circumradius_sq,
    regular_simplex,
    simplex_volume,
    simplex_volume_sq,
    subspace_angle,
    to_fraction,
)


def test_to_fraction_refuses_floats():
    assert to_fraction("3/7") == Fraction(3, 7)
    assert to_fraction(5) == 5
    with pytest.raises(TypeError):
        to_fraction(0.5)


def test_slice_membership():
    sl = SliceSpec(2, 2, Fraction(1, 10))
    assert sl.contains(ExactPoint((5, -3), (0, Fraction(1, 10))))
    assert not sl.contains(ExactPoint((0, 0), (Fraction(11, 100), 0)))
    assert sl.contains(FloatPoint(np.array([0, 0, 0.1 + 1e-12, 0]), 2, 2), tol=1e-10)


def test_unit_tetrahedron_exact():
    s = regular_simplex(3, edge_sq=1)
    assert cayley_menger_det(s) == 4
    assert q11_circumradius_sq(s) == Fraction(3, 8)
    assert abs(float(simplex_volume(s)) - 1 / (6 * math.sqrt(2))) < 1e-15
    assert abs(float(inradius(s)) - 1 / math.sqrt(24)) < 1e-15


@pytest.mark.parametrize("m", range(1, 7))
def test_cm_factor_sign_and_volume(m):
    rng = np.random.default_rng(m)
    verts = rng.standard_normal((m + 1, m + 2))
    s = Simplex(verts)
    assert cm_volume_factor(m) == (-1) ** (m + 1) * 2**m * math.factorial(m) ** 2
    assert simplex_volume_sq(s) == pytest.approx(volume_sq_oracle(verts), rel=1e-9)


@given(st.integers(0, 10_000), st.integers(2, 4))
@settings(max_examples=40, deadline=None)
def test_circumradius_matches_oracle(seed, m):
    verts = np.random.default_rng(seed).standard_normal((m + 1, 5))
    s = Simplex(verts)
    sph = circumsphere(s)
    r2 = circumradius_sq_oracle(verts)
    assert float(sph.radius_sq) == pytest.approx(r2, rel=1e-8)
    assert float(q11_circumradius_sq(s)) == pytest.approx(r2, rel=1e-8)
    d = np.linalg.norm(verts - sph.center, axis=1)
    assert np.allclose(d, math.sqrt(r2), rtol=1e-9)


def test_exact_rational_simplex():
    pts = [ExactPoint((0, 0), ()), ExactPoint((1, 0), ()), ExactPoint((0, 1), ())]
    s = Simplex(pts)
    assert s.backing == "exact"
    assert simplex_volume_sq(s) == Fraction(1, 4)
    sph = circumsphere(s)
    assert sph.radius_sq == Fraction(1, 2)
    assert sph.exact_center == (Fraction(1, 2), Fraction(1, 2))


def test_degenerate_simplex():
    s = Simplex(np.array([[0.0, 0], [1, 0], [2, 0]]))
    assert simplex_volume(s) == 0.0
    with pytest.raises(DegenerateSimplexError):
        circumsphere(s)
    s = Simplex([ExactPoint((0, 0), ()), ExactPoint((1, 1), ()), ExactPoint((2, 2), ())])
    assert simplex_volume(s) == 0


def test_degeneracy_is_scale_free():
    verts = np.random.default_rng(1).standard_normal((4, 9)) * 1e-6
    circumsphere(Simplex(verts))


def test_mixed_backing_rejected():
    with pytest.raises((BackingMismatchError, GeometryError, TypeError)):
        Simplex([ExactPoint((0, 0), ()), FloatPoint(np.array([1.0, 0.0]), 2)])


@pytest.mark.parametrize("n", range(1, 7))
def test_edge_condition_gives_unit_inradius(n):
    s = regular_simplex(n, edge_sq=2 * n * (n + 1))
    r = inradius(s)
    assert r == 1 and isinstance(r, Fraction)


def test_attached_sphere_of_triangle():
    s = regular_simplex(2, edge_sq=1)
    sph = attached_sphere(s, 9)
    assert sph.radius_sq == Fraction(2, 3)
    assert sph.sphere_dim == 6


def test_attached_sphere_empty():
    with pytest.raises(EmptyAttachedSphereError):
        attached_sphere(regular_simplex(3, edge_sq=24), 9)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_attached_radius_formula(seed):
    rng = np.random.default_rng(seed)
    verts = rng.standard_normal((4, 6)) * rng.uniform(0.05, 0.4)
    s = Simplex(verts)
    r2 = float(circumsphere(s).radius_sq)
    if r2 >= 1:
        return
    sph = attached_sphere(s, 6)
    assert abs(float(sph.radius) - math.sqrt(1 - r2)) < 1e-10
    pts = sph.sample(20, rng)
    assert np.allclose(np.linalg.norm(pts[:, None] - verts[None], axis=2), 1, atol=1e-10)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_subspace_angle_vs_scipy(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((2, 5))
    b = rng.standard_normal((3, 5))
    ours = subspace_angle(a, b)
    principal = subspace_angles(a.T, b.T)
    assert math.cos(ours) == pytest.approx(float(np.prod(np.cos(principal))), abs=1e-9)
    assert 0 <= ours <= math.pi / 2


def test_subspace_angle_rotation():
    for theta in (1e-9, 1e-4, 0.3, 1.2):
        p = np.array([[1.0, 0, 0]])
        q = np.array([[math.cos(theta), math.sin(theta), 0]])
        assert subspace_angle(p, q) == pytest.approx(theta, rel=1e-9)


def test_subspace_angle_tiny_angle_precision():
    theta = 1e-12
    p = np.eye(4)[:2]
    q = np.array([[1, 0, 0, 0], [0, math.cos(theta), math.sin(theta), 0]])
    assert subspace_angle(p, q) == pytest.approx(theta, rel=1e-6)


def test_equator_is_great_subsphere():
    sph = attached_sphere(regular_simplex(2, edge_sq=1), 9)
    eq = equator(sph, 2, orientation_seed=3)
    assert eq.sphere_dim == 2
    pts = equator_points(eq, 500)
    assert np.allclose(np.linalg.norm(pts - sph.center, axis=1), float(sph.radius), atol=1e-12)
    assert all(sph.contains(p) for p in pts[:50])
    with pytest.raises(GeometryError):
        equator(sph, 6)
