"""Quaternion algebra, the double cover SU(2) -> SO(3) and ASD 2-form matrices.

Points of R^4 are identified with quaternions through
(x0, x1, x2, x3) <-> x0 + x1 i + x2 j + x3 k. Lie-algebra values are stored as
3-vectors in the basis {i, j, k}, so that [a, b] = 2 a x b.

A 2-form is stored as an antisymmetric array ``F[mu, nu, a]`` of shape (4, 4, 3).
``Mat(F)`` is the 3x3 matrix whose column c holds half the omega_c component of
the ASD part, with omega_1 = dx0dx1 - dx2dx3, omega_2 = dx0dx2 - dx3dx1,
omega_3 = dx0dx3 - dx1dx2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy.spatial.transform import Rotation

from .exceptions import InvalidArgumentError
from .types import ROTATION_TOL, UNIT_NORM_TOL

if TYPE_CHECKING:
    from typing import Iterable

    from .types import FloatArray

# Index pairs (c', c'') completing dx^0 ^ dx^c to omega_c.
OMEGA_PAIRS = ((2, 3), (3, 1), (1, 2))


@dataclass(frozen=True)
class Quaternion:
    """Quaternion w + x i + y j + z k."""

    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: Iterable[float]) -> Quaternion:
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    @classmethod
    def from_parts(cls, real: float, imag: Iterable[float]) -> Quaternion:
        x, y, z = (float(v) for v in imag)
        return cls(float(real), x, y, z)

    def as_array(self) -> FloatArray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> FloatArray:
        return np.array([self.x, self.y, self.z])

    def conjugate(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def inverse(self) -> Quaternion:
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise InvalidArgumentError("zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def normalized(self) -> Quaternion:
        n = self.norm()
        if n == 0.0:
            raise InvalidArgumentError("cannot normalize the zero quaternion")
        return self / n

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Quaternion | float) -> Quaternion:
        if isinstance(other, Quaternion):
            return quat_product(self, other)
        s = float(other)
        return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)

    def __rmul__(self, other: float) -> Quaternion:
        s = float(other)
        return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)

    def __truediv__(self, other: float) -> Quaternion:
        s = float(other)
        return Quaternion(self.w / s, self.x / s, self.y / s, self.z / s)


ONE = Quaternion(1.0)
UNIT_I = Quaternion(0.0, 1.0)
UNIT_J = Quaternion(0.0, 0.0, 1.0)
UNIT_K = Quaternion(0.0, 0.0, 0.0, 1.0)


def as_point(x: Quaternion | Iterable[float]) -> FloatArray:
    """Coordinates (x0, x1, x2, x3) of a point given as a quaternion or a sequence."""
    if isinstance(x, Quaternion):
        return x.as_array()
    point = np.asarray(x, dtype=float)
    if point.shape != (4,):
        raise InvalidArgumentError(f"expected a point of R^4, got shape {point.shape}")
    return point


def quat_product(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def rho(g: Quaternion) -> FloatArray:
    """Image of a unit quaternion under the double cover SU(2) -> SO(3).

    Column c holds the coefficients of ``g e_c g^-1`` in the basis {i, j, k}.

    :param g: Unit quaternion.
    :return: Rotation matrix.
    :raises InvalidArgumentError: If ``g`` is not a unit quaternion.
    """
    deviation = abs(g.norm() - 1.0)
    if deviation >= UNIT_NORM_TOL:
        raise InvalidArgumentError(f"rho needs a unit quaternion, norm deviates by {deviation:.3e}")
    w, x, y, z = g.w, g.x, g.y, g.z
    return np.array(
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
            [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
            [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
        ]
    )


def lift_rotation(m: FloatArray) -> Quaternion:
    """One of the two unit quaternions ``g`` with ``rho(g) = m``."""
    x, y, z, w = Rotation.from_matrix(m).as_quat()
    return Quaternion(w, x, y, z)


def is_rotation(m: FloatArray, tol: float = ROTATION_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        return False
    return bool(np.abs(m.T @ m - np.eye(3)).max() < tol and abs(np.linalg.det(m) - 1.0) < tol)


def so3_log(m: FloatArray) -> FloatArray:
    """Rotation vector of ``m``: axis times angle, angle in [0, pi]."""
    return np.asarray(Rotation.from_matrix(m).as_rotvec())


def so3_exp(v: FloatArray) -> FloatArray:
    return np.asarray(Rotation.from_rotvec(v).as_matrix())


def rotation_angle(m: FloatArray) -> float:
    return float(np.linalg.norm(so3_log(m)))


def skew(v: FloatArray) -> FloatArray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def random_unit_quaternion(rng: np.random.Generator) -> Quaternion:
    return Quaternion.from_array(rng.standard_normal(4)).normalized()


def random_rotation(rng: np.random.Generator) -> FloatArray:
    """Haar-distributed rotation matrix."""
    return rho(random_unit_quaternion(rng))


class SignedSVD(NamedTuple):
    """``P = U diag(d) V^T`` with ``U, V`` in SO(3) and ``d1 >= d2 >= |d3|``."""

    U: FloatArray
    d: FloatArray
    V: FloatArray

    @property
    def D(self) -> FloatArray:
        return np.diag(self.d)


def signed_svd(P: FloatArray) -> SignedSVD:
    """Signed singular value decomposition of a 3x3 matrix.

    The third singular value carries the sign of ``det P``. The first two
    columns of ``U`` are fixed so that their largest-magnitude entry is
    positive, which makes the factors reproducible for tied spectra.

    :param P: 3x3 real matrix.
    :return: The factors ``(U, d, V)``.
    """
    U, S, Vt = np.linalg.svd(np.asarray(P, dtype=float))
    V = Vt.T.copy()
    d = S.copy()
    if np.linalg.det(U) < 0:
        U[:, 2] *= -1.0
        d[2] *= -1.0
    if np.linalg.det(V) < 0:
        V[:, 2] *= -1.0
        d[2] *= -1.0
    for k in (0, 1):
        if U[int(np.argmax(np.abs(U[:, k]))), k] < 0:
            # flipping u_k, v_k together with u_3, v_3 keeps both P and the determinants
            U[:, k] *= -1.0
            V[:, k] *= -1.0
            U[:, 2] *= -1.0
            V[:, 2] *= -1.0
    return SignedSVD(U, d, V)


def singular_values(P: FloatArray) -> FloatArray:
    """Singular values in decreasing order."""
    return np.asarray(np.linalg.svd(np.asarray(P, dtype=float), compute_uv=False))


def mat_gauge_transform(P: FloatArray, g: FloatArray, h: FloatArray) -> FloatArray:
    """Gauge (left) and frame (right) action ``g P h`` on a curvature matrix."""
    return np.asarray(g) @ np.asarray(P) @ np.asarray(h)


def two_form_from_mat(mat: FloatArray, sd_mat: FloatArray | None = None) -> FloatArray:
    """Antisymmetric (4, 4, 3) array of the 2-form with ASD matrix ``mat``.

    :param mat: ASD matrix, columns are half the omega components.
    :param sd_mat: Optional SD matrix in the same normalization.
    """
    F = np.zeros((4, 4, 3))
    sd = np.zeros((3, 3)) if sd_mat is None else np.asarray(sd_mat)
    mat = np.asarray(mat)
    for c, (a, b) in enumerate(OMEGA_PAIRS):
        F[0, c + 1] = 2.0 * (mat[:, c] + sd[:, c])
        F[a, b] = 2.0 * (sd[:, c] - mat[:, c])
    return F - F.transpose(1, 0, 2)


def asd_mat(F: FloatArray) -> FloatArray:
    """``Mat`` of the ASD part of a (4, 4, 3) 2-form array."""
    mat = np.empty((3, 3))
    for c, (a, b) in enumerate(OMEGA_PAIRS):
        mat[:, c] = 0.25 * (F[0, c + 1] - F[a, b])
    return mat


def sd_mat(F: FloatArray) -> FloatArray:
    """Self-dual counterpart of :func:`asd_mat`."""
    mat = np.empty((3, 3))
    for c, (a, b) in enumerate(OMEGA_PAIRS):
        mat[:, c] = 0.25 * (F[0, c + 1] + F[a, b])
    return mat


def two_form_norm_sq(F: FloatArray) -> float:
    """Sum over all ordered index pairs of ``|F_mu nu|^2``."""
    return float(np.sum(np.asarray(F) ** 2))
