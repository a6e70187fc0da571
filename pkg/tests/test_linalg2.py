import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binormix import (
    Affine2,
    NotPositiveDefinite,
    SingularAffine,
    affine_apply,
    affine_compose,
    affine_inverse,
    identity_affine,
    is_spd,
    rotation,
    spd_inv_sqrt,
    spd_inverse,
    sym2,
    sym_eigen,
    vec2,
)

spd_matrices = st.builds(
    lambda e1, e2, theta: rotation(theta) @ np.diag([e1, e2]) @ rotation(theta).T,
    st.floats(0.05, 20.0),
    st.floats(0.05, 20.0),
    st.floats(0.0, np.pi),
)


def test_spd_inverse_identity():
    assert np.array_equal(spd_inverse(np.eye(2)), np.eye(2))


def test_spd_inverse_diagonal():
    np.testing.assert_allclose(
        spd_inverse(np.diag([1.0, 0.2])), np.diag([1.0, 5.0]), rtol=1e-15
    )


def test_spd_inverse_correlated():
    # adjugate over determinant: det = 0.36, entries 1/0.36 = 25/9
    inv = spd_inverse(sym2(1.0, 0.8, 1.0))
    np.testing.assert_allclose(
        inv, [[25 / 9, -20 / 9], [-20 / 9, 25 / 9]], rtol=1e-14
    )
    np.testing.assert_allclose(inv @ sym2(1.0, 0.8, 1.0), np.eye(2), atol=1e-15)


@pytest.mark.parametrize(
    "bad",
    [
        [[1.0, 0.0], [0.0, -1.0]],
        [[0.0, 0.0], [0.0, 1.0]],
        [[1.0, 2.0], [2.0, 1.0]],
        [[1.0, 0.5], [0.4, 1.0]],
        [[np.inf, 0.0], [0.0, 1.0]],
    ],
)
def test_spd_inverse_rejects(bad):
    assert not is_spd(np.array(bad))
    with pytest.raises(NotPositiveDefinite):
        spd_inverse(np.array(bad))


def test_spd_inv_sqrt_diagonal():
    np.testing.assert_allclose(
        spd_inv_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), rtol=1e-15
    )
    assert np.array_equal(spd_inv_sqrt(np.eye(2)), np.eye(2))


def test_spd_inv_sqrt_correlated():
    m = sym2(2.0, 1.0, 1.0)
    s = spd_inv_sqrt(m)
    np.testing.assert_allclose(s, s.T, atol=0)
    np.testing.assert_allclose(s @ m @ s, np.eye(2), atol=1e-14)


def test_sym_eigen_ordered_diagonal():
    lam1, lam2, rot = sym_eigen(np.diag([3.0, 1.0]))
    assert (lam1, lam2) == (3.0, 1.0)
    assert np.array_equal(rot, np.eye(2))


def test_sym_eigen_reversed_diagonal_uses_quarter_turn():
    lam1, lam2, rot = sym_eigen(np.diag([1.0, 3.0]))
    assert (lam1, lam2) == (3.0, 1.0)
    np.testing.assert_allclose(
        rot @ np.diag([lam1, lam2]) @ rot.T, np.diag([1.0, 3.0]), atol=1e-15
    )


def test_sym_eigen_45_degrees():
    lam1, lam2, rot = sym_eigen(sym2(1.0, 0.8, 1.0))
    np.testing.assert_allclose([lam1, lam2], [1.8, 0.2], rtol=1e-15)
    np.testing.assert_allclose(rot, rotation(np.pi / 4), rtol=1e-15)


def test_sym_eigen_degenerate_spectrum():
    lam1, lam2, rot = sym_eigen(np.eye(2))
    assert lam1 == lam2 == 1.0
    assert np.array_equal(rot, np.eye(2))


@settings(max_examples=200, deadline=None)
@given(spd_matrices)
def test_spd_inverse_reconstruction(m):
    np.testing.assert_allclose(m @ spd_inverse(m), np.eye(2), atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(spd_matrices)
def test_spd_inv_sqrt_reconstruction(m):
    s = spd_inv_sqrt(m)
    assert np.max(np.abs(s @ m @ s - np.eye(2))) < 1e-10


@settings(max_examples=200, deadline=None)
@given(spd_matrices)
def test_sym_eigen_reconstruction(m):
    lam1, lam2, rot = sym_eigen(m)
    assert lam1 >= lam2
    np.testing.assert_allclose(rot @ rot.T, np.eye(2), atol=1e-14)
    assert np.linalg.det(rot) > 0
    assert np.max(np.abs(rot @ np.diag([lam1, lam2]) @ rot.T - m)) < 1e-12


def test_affine_basics():
    t = Affine2(np.diag([2.0, 2.0]), vec2(1.0, 0.0))
    assert np.array_equal(affine_apply(identity_affine(), vec2(3.0, -1.0)), [3.0, -1.0])
    assert np.array_equal(affine_apply(t, vec2(0.0, 0.0)), [1.0, 0.0])
    assert np.array_equal(affine_apply(affine_inverse(t), vec2(1.0, 0.0)), [0.0, 0.0])


def test_affine_rejects_singular():
    with pytest.raises(SingularAffine):
        Affine2(np.array([[1.0, 2.0], [2.0, 4.0]]), np.zeros(2))


affine_maps = st.builds(
    lambda t1, t2, s1, s2, b1, b2: Affine2(
        rotation(t1) @ np.diag([s1, s2]) @ rotation(t2), vec2(b1, b2)
    ),
    st.floats(0.0, 2 * np.pi),
    st.floats(0.0, 2 * np.pi),
    st.floats(0.01, 100.0),
    st.floats(0.01, 100.0),
    st.floats(-10.0, 10.0),
    st.floats(-10.0, 10.0),
)


@settings(max_examples=200, deadline=None)
@given(affine_maps, st.floats(-10.0, 10.0), st.floats(-10.0, 10.0))
def test_affine_round_trip(t, x, y):
    v = vec2(x, y)
    w = affine_apply(affine_inverse(t), affine_apply(t, v))
    assert np.linalg.norm(w - v) < 1e-10


@settings(max_examples=100, deadline=None)
@given(affine_maps, affine_maps, affine_maps, st.floats(-5.0, 5.0), st.floats(-5.0, 5.0))
def test_affine_compose_associative(a, b, c, x, y):
    v = vec2(x, y)
    left = affine_apply(affine_compose(affine_compose(a, b), c), v)
    right = affine_apply(affine_compose(a, affine_compose(b, c)), v)
    scale = 1.0 + np.linalg.norm(left)
    assert np.linalg.norm(left - right) < 1e-9 * scale


def test_compose_applies_right_map_first():
    shift = Affine2(np.eye(2), vec2(1.0, 0.0))
    scale = Affine2(np.diag([2.0, 2.0]), np.zeros(2))
    # (scale o shift)(0) = scale(1, 0) = (2, 0)
    assert np.array_equal(affine_apply(affine_compose(scale, shift), np.zeros(2)), [2.0, 0.0])
