import numpy as np
import pytest

from bdp import (
    Box,
    MapSequence,
    SmoothMap,
    apply_sequence,
    estimate_seminorms,
    inverse_jacobian_norm,
    operator_norm,
    polynomial_map,
    quadratic_1d,
    rotation_map,
)
from bdp.errors import OutOfRegionError, SingularJacobianError


def affine_2d(mat, offset):
    mat = np.asarray(mat, dtype=float)
    offset = np.asarray(offset, dtype=float)
    return SmoothMap(dim=2, func=lambda x: mat @ x + offset, jacobian=lambda x: mat)


def test_apply_sequence_identity():
    ident = SmoothMap(dim=2, func=lambda x: x.copy())
    orbit = apply_sequence(MapSequence((ident,) * 3), np.array([0.5, 0.5]))
    assert len(orbit) == 4
    for p in orbit:
        assert np.allclose(p, [0.5, 0.5])


def test_apply_sequence_halving():
    half = SmoothMap(dim=1, func=lambda x: x / 2)
    orbit = apply_sequence(MapSequence((half,) * 3), np.array([1.0]))
    assert np.allclose([p[0] for p in orbit], [1.0, 0.5, 0.25, 0.125])


def test_apply_sequence_matches_stepwise_oracle():
    rng = np.random.default_rng(42)
    mats = rng.normal(size=(10, 2, 2))
    offs = rng.normal(size=(10, 2))
    seq = MapSequence(tuple(affine_2d(a, c) for a, c in zip(mats, offs)))
    x0 = np.array([0.3, -0.4])
    orbit = apply_sequence(seq, x0)

    # independent step-by-step loop
    x = x0.copy()
    expected = [x.copy()]
    for a, c in zip(mats, offs):
        x = a @ x + c
        expected.append(x.copy())
    for got, want in zip(orbit, expected):
        assert np.allclose(got, want, atol=1e-12)


def test_operator_norm_basics():
    assert operator_norm(np.diag([3.0, 4.0])) == pytest.approx(4.0)
    assert operator_norm(np.eye(5)) == pytest.approx(1.0)
    assert operator_norm([[0.0, 1.0], [1.0, 0.0]]) == pytest.approx(1.0)


def test_operator_norm_submultiplicative():
    rng = np.random.default_rng(13)
    for _ in range(200):
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3))
        assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) + 1e-12


def test_inverse_norm_bounds_vector_shrinkage():
    # ‖v‖/‖Av‖ ≤ ‖A⁻¹‖ for invertible A
    rng = np.random.default_rng(99)
    done = 0
    while done < 200:
        a = rng.normal(size=(3, 3))
        if abs(np.linalg.det(a)) < 1e-3:
            continue
        v = rng.normal(size=3)
        if np.linalg.norm(v) < 1e-9:
            continue
        lhs = np.linalg.norm(v) / np.linalg.norm(a @ v)
        assert lhs <= operator_norm(np.linalg.inv(a)) + 1e-12
        done += 1


def test_inverse_jacobian_norm_examples():
    ident = SmoothMap(dim=2, func=lambda x: x.copy(), jacobian=lambda x: np.eye(2))
    assert inverse_jacobian_norm(ident, np.array([3.0, -1.0])) == pytest.approx(1.0)

    scale = affine_2d(np.diag([2.0, 0.5]), [0.0, 0.0])
    assert inverse_jacobian_norm(scale, np.zeros(2)) == pytest.approx(2.0)

    quad = quadratic_1d(0.5, 0.125)
    assert inverse_jacobian_norm(quad, np.zeros(1)) == pytest.approx(2.0)


def test_inverse_jacobian_norm_singular():
    collapse = affine_2d([[1.0, 0.0], [0.0, 0.0]], [0.0, 0.0])
    with pytest.raises(SingularJacobianError):
        inverse_jacobian_norm(collapse, np.zeros(2))


def test_out_of_region_reports_step():
    m = SmoothMap(dim=1, func=lambda x: x + 1.0, region=Box([0.0], [2.0]))
    with pytest.raises(OutOfRegionError) as info:
        apply_sequence(MapSequence((m,) * 5), np.array([0.5]))
    assert info.value.step == 3  # x reaches 2.5 entering step 3


def test_seminorms_affine_1d():
    m = SmoothMap(
        dim=1,
        func=lambda x: 0.5 * x + 0.25,
        jacobian=lambda x: np.array([[0.5]]),
        second=lambda x, u, v: np.zeros(1),
    )
    est = estimate_seminorms(m, Box([0.0], [1.0]), resolution=9)
    assert est.c1 == pytest.approx(0.5)
    assert est.c1_inv == pytest.approx(2.0)
    assert est.c2 == 0.0
    assert est.provenance == "sampled"


def test_seminorms_rotation_isometry():
    m = rotation_map(0.7)
    bare = SmoothMap(dim=2, func=m.func, jacobian=m.jacobian, second=m.second)
    est = estimate_seminorms(bare, Box([-1, -1], [1, 1]), resolution=5)
    assert est.c1 == pytest.approx(1.0)
    assert est.c1_inv == pytest.approx(1.0)
    assert est.c2 == pytest.approx(0.0, abs=1e-12)


def test_seminorms_analytic_annotation_returned():
    m = quadratic_1d(0.5, 0.125)
    est = estimate_seminorms(m, Box([0.0], [1.0]), resolution=5)
    assert est.provenance == "analytic"
    assert est.c1 == pytest.approx(0.75)
    assert est.c1_inv == pytest.approx(2.0)
    assert est.c2 == pytest.approx(0.25)


def test_sampled_seminorms_below_analytic():
    m = quadratic_1d(0.5, 0.125)
    bare = SmoothMap(dim=1, func=m.func, jacobian=m.jacobian, second=m.second)
    for res in (3, 5, 9):
        est = estimate_seminorms(bare, Box([0.0], [1.0]), resolution=res)
        assert est.c1 <= 0.75 + 1e-12
        assert est.c1_inv <= 2.0 + 1e-12
        assert est.c2 <= 0.25 + 1e-12


def test_seminorms_monotone_in_nested_resolution():
    # nested grids: the refined maximum can only grow
    m = polynomial_map([[(0.3, (1, 0)), (0.05, (2, 0)), (0.04, (1, 1))], [(0.4, (0, 1))]])
    bare = SmoothMap(dim=2, func=m.func, jacobian=m.jacobian, second=m.second)
    box = Box([-1, -1], [1, 1])
    prev = None
    for res in (3, 5, 9):
        est = estimate_seminorms(bare, box, resolution=res, epsilon=0.5)
        if prev is not None:
            assert est.c1 >= prev.c1 - 1e-15
            assert est.c1_inv >= prev.c1_inv - 1e-15
            assert est.c2 >= prev.c2 - 1e-15
        prev = est


def test_affine_holder_zero():
    aff = affine_2d([[0.5, 0.1], [0.0, 0.7]], [0.2, -0.1])
    m = SmoothMap(dim=2, func=aff.func, jacobian=aff.jacobian, second=lambda x, u, v: np.zeros(2))
    for eps in (0.25, 0.5, 0.75):
        est = estimate_seminorms(m, Box([-1, -1], [1, 1]), resolution=4, epsilon=eps)
        assert est.c2 == 0.0
        assert est.holder == (eps, 0.0)


def test_singular_grid_flags_infinite_inverse():
    # Jacobian vanishes at x = 0, which the grid contains
    m = SmoothMap(
        dim=1,
        func=lambda x: x**3,
        jacobian=lambda x: np.array([[3 * x[0] ** 2]]),
        second=lambda x, u, v: np.array([6 * x[0] * u[0] * v[0]]),
    )
    est = estimate_seminorms(m, Box([-1.0], [1.0]), resolution=5)
    assert est.c1_inv == np.inf


def test_map_sequence_validation():
    with pytest.raises(ValueError):
        MapSequence(())
    one_d = SmoothMap(dim=1, func=lambda x: x)
    two_d = SmoothMap(dim=2, func=lambda x: x)
    with pytest.raises(Exception):
        MapSequence((one_d, two_d))


def test_inverse_consistency_of_builtins():
    m = quadratic_1d(0.5, 0.125)
    for x in np.linspace(0.0, 1.0, 7):
        y = m.func(np.array([x]))
        assert m.inverse(y)[0] == pytest.approx(x, abs=1e-9)
