"""Signed SVD and ASD matrices of 2-forms."""

import numpy as np
import pytest

from asd_boundary.algebra import (
    asd_mat,
    mat_gauge_transform,
    random_rotation,
    sd_mat,
    signed_svd,
    singular_values,
    two_form_from_mat,
    two_form_norm_sq,
)


def test_signed_svd_reconstructs(rng):
    for _ in range(100):
        P = rng.uniform(-1.0, 1.0, (3, 3))
        U, d, V = signed_svd(P)
        np.testing.assert_allclose(U @ np.diag(d) @ V.T, P, atol=1e-13)
        assert np.linalg.det(U) == pytest.approx(1.0)
        assert np.linalg.det(V) == pytest.approx(1.0)
        assert d[0] >= d[1] >= abs(d[2])
        assert np.sign(d[2]) == np.sign(np.linalg.det(P))


def test_signed_svd_is_reproducible():
    P = np.diag([3.0, 2.0, -1.0])
    first = signed_svd(P)
    second = signed_svd(P.copy())
    np.testing.assert_array_equal(first.U, second.U)
    np.testing.assert_array_equal(first.D, np.diag(first.d))


def test_gauge_transform_keeps_singular_values(rng):
    P = rng.uniform(-1.0, 1.0, (3, 3))
    moved = mat_gauge_transform(P, random_rotation(rng), random_rotation(rng))
    np.testing.assert_allclose(singular_values(moved), singular_values(P), atol=1e-13)


def test_two_form_round_trip(rng):
    mat = rng.standard_normal((3, 3))
    sd = rng.standard_normal((3, 3))
    F = two_form_from_mat(mat, sd)
    np.testing.assert_allclose(F, -F.transpose(1, 0, 2))
    np.testing.assert_allclose(asd_mat(F), mat, atol=1e-14)
    np.testing.assert_allclose(sd_mat(F), sd, atol=1e-14)
    np.testing.assert_allclose(sd_mat(two_form_from_mat(mat)), 0.0)


def test_unit_instanton_norm():
    """The unit instanton at its center has |F|^2 = 48."""
    assert two_form_norm_sq(two_form_from_mat(np.eye(3))) == pytest.approx(48.0)


def test_signed_svd_of_a_signed_diagonal():
    U, d, V = signed_svd(np.diag([3.0, 2.0, -1.0]))
    np.testing.assert_allclose(U, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(V, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(d, [3.0, 2.0, -1.0], atol=1e-15)


def test_singular_values_match_the_gram_spectrum(rng):
    for _ in range(200):
        P = rng.uniform(-1.0, 1.0, (3, 3))
        d = signed_svd(P).d
        gram = np.sqrt(np.clip(np.linalg.eigvalsh(P.T @ P)[::-1], 0.0, None))
        np.testing.assert_allclose(np.abs(d), gram, rtol=1e-9, atol=1e-7)
        assert d[1] == pytest.approx(gram[1], rel=1e-9)
