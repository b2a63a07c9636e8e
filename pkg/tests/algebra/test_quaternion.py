"""Quaternion arithmetic and the double cover."""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from asd_boundary.algebra import (
    ONE,
    UNIT_I,
    UNIT_J,
    UNIT_K,
    Quaternion,
    as_point,
    is_rotation,
    lift_rotation,
    random_rotation,
    random_unit_quaternion,
    rho,
    rotation_angle,
    so3_exp,
    so3_log,
)
from asd_boundary.exceptions import InvalidArgumentError


def test_hamilton_relations():
    assert UNIT_I * UNIT_J == UNIT_K
    assert UNIT_J * UNIT_I == -UNIT_K
    assert UNIT_K * UNIT_K == -ONE
    assert UNIT_I * UNIT_J * UNIT_K == -ONE


def test_inverse_and_conjugate():
    q = Quaternion(1.0, -2.0, 0.5, 3.0)
    product = q * q.inverse()
    np.testing.assert_allclose(product.as_array(), [1.0, 0.0, 0.0, 0.0], atol=1e-15)
    assert (q * q.conjugate()).w == pytest.approx(q.norm_sq())
    with pytest.raises(InvalidArgumentError):
        Quaternion(0.0).inverse()


def test_rho_is_a_homomorphism(rng):
    """rho(pq) = rho(p) rho(q) and rho(-g) = rho(g)."""
    for _ in range(50):
        p = random_unit_quaternion(rng)
        q = random_unit_quaternion(rng)
        np.testing.assert_allclose(rho(p * q), rho(p) @ rho(q), atol=1e-13)
        np.testing.assert_allclose(rho(-p), rho(p), atol=1e-15)
        assert is_rotation(rho(p))


def test_rho_of_basis_elements():
    np.testing.assert_allclose(rho(ONE), np.eye(3))
    np.testing.assert_allclose(rho(UNIT_I), np.diag([1.0, -1.0, -1.0]))
    np.testing.assert_allclose(rho(UNIT_K), np.diag([-1.0, -1.0, 1.0]))


def test_rho_columns_are_conjugated_basis(rng):
    g = random_unit_quaternion(rng)
    for c, e in enumerate((UNIT_I, UNIT_J, UNIT_K)):
        conjugated = g * e * g.conjugate()
        np.testing.assert_allclose(rho(g)[:, c], conjugated.imag, atol=1e-14)


def test_rho_rejects_non_unit_quaternions():
    with pytest.raises(InvalidArgumentError):
        rho(Quaternion(1.0, 1.0))


def test_lift_rotation(rng):
    for _ in range(20):
        m = random_rotation(rng)
        np.testing.assert_allclose(rho(lift_rotation(m)), m, atol=1e-12)


def test_so3_log_and_exp(rng):
    for _ in range(20):
        m = random_rotation(rng)
        v = so3_log(m)
        assert 0.0 <= np.linalg.norm(v) <= np.pi + 1e-12
        np.testing.assert_allclose(so3_exp(v), m, atol=1e-12)
    assert rotation_angle(np.diag([1.0, -1.0, -1.0])) == pytest.approx(np.pi)


def test_as_point():
    np.testing.assert_array_equal(as_point(UNIT_J), [0.0, 0.0, 1.0, 0.0])
    np.testing.assert_array_equal(as_point([1, 2, 3, 4]), [1.0, 2.0, 3.0, 4.0])
    with pytest.raises(InvalidArgumentError):
        as_point([1.0, 2.0, 3.0])


@pytest.mark.parametrize("n", [1000, pytest.param(100_000, marks=pytest.mark.slow)])
def test_rho_hits_every_rotation_twice(n):
    targets = Rotation.from_quat(np.random.default_rng(20240611).standard_normal((n, 4))).as_matrix()
    for m in targets:
        g = lift_rotation(m)
        assert abs(g.norm() - 1.0) < 1e-12
        np.testing.assert_allclose(rho(g), m, atol=1e-12)
        np.testing.assert_allclose(rho(-g), m, atol=1e-12)
