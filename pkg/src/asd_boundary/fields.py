"""Connections and curvatures on a flat coordinate patch.

Connection forms are (4, 3) arrays ``A[mu]`` of su(2) vectors and curvatures
are antisymmetric (4, 4, 3) arrays, with
``F_mu nu = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]`` and ``[a, b] = 2 a x b``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .algebra import Quaternion, as_point, asd_mat, is_rotation, lift_rotation, rho, singular_values, skew, two_form_from_mat
from .exceptions import InvalidArgumentError, OutOfPatchError, ScaleValidationError, SingularGaugeError
from .types import DEFAULT_R1_FACTOR, DEFAULT_R2_FACTOR, INNER_SEPARATION, OUTER_SEPARATION, UNIT_NORM_TOL

if TYPE_CHECKING:
    from typing import Callable, Iterable

    from .types import FloatArray

    PointLike = Quaternion | Iterable[float]

logger = logging.getLogger(__name__)

# (sigma, mu, nu) triples of the cyclic Bianchi sums.
BIANCHI_TRIPLES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))


def bracket(A: FloatArray, B: FloatArray) -> FloatArray:
    """``[A_mu, B_nu]`` for every index pair, shape (4, 4, 3)."""
    return 2.0 * np.cross(A[:, None, :], B[None, :, :])


def wedge_scalar(db: FloatArray, A: FloatArray) -> FloatArray:
    """``(d beta ^ A)_mu nu`` for a scalar function with gradient ``db``."""
    term = db[:, None, None] * A[None, :, :]
    return term - term.transpose(1, 0, 2)


def cutoff(r: float) -> float:
    """Monotone C^2 cutoff: 0 below 1/2, 1 above 2, slope at most 1."""
    if r <= 0.5:
        return 0.0
    if r >= 2.0:
        return 1.0
    if r <= 1.0:
        u = 2.0 * (r - 0.5)
        return 0.5 * (u**3 - 0.5 * u**4)
    if r <= 1.5:
        return 0.25 + (r - 1.0)
    return 1.0 - cutoff(2.5 - r)


def cutoff_slope(r: float) -> float:
    if r <= 0.5 or r >= 2.0:
        return 0.0
    if r <= 1.0:
        u = 2.0 * (r - 0.5)
        return 3.0 * u**2 - 2.0 * u**3
    if r <= 1.5:
        return 1.0
    return cutoff_slope(2.5 - r)


@dataclass(frozen=True, eq=False)
class GluingData:
    """Bubble parameters: center ``y``, scale ``lam`` and gluing angle ``m = rho(g0)``."""

    y: FloatArray
    lam: float
    m: FloatArray
    g0: Quaternion

    def __post_init__(self) -> None:
        object.__setattr__(self, "y", as_point(self.y))
        object.__setattr__(self, "m", np.asarray(self.m, dtype=float))
        if not self.lam > 0:
            raise InvalidArgumentError(f"bubble scale must be positive, got {self.lam}")
        if not is_rotation(self.m):
            raise InvalidArgumentError("gluing angle is not a rotation matrix")
        if np.abs(rho(self.g0) - self.m).max() >= UNIT_NORM_TOL:
            raise InvalidArgumentError("g0 does not lift the gluing angle")

    @classmethod
    def from_rotation(cls, y: PointLike, lam: float, m: FloatArray) -> GluingData:
        return cls(as_point(y), float(lam), m, lift_rotation(np.asarray(m, dtype=float)))


@dataclass(frozen=True, eq=False)
class BackgroundModel:
    """Affine background curvature ``Mat(x) = P0 + P1 . x`` on a flat patch.

    ``P1[:, :, mu]`` is the derivative of the curvature matrix along ``x^mu``.
    """

    P0: FloatArray
    P1: FloatArray = field(default_factory=lambda: np.zeros((3, 3, 4)))
    patch_radius: float = 1.0

    def __post_init__(self) -> None:
        P0 = np.asarray(self.P0, dtype=float)
        P1 = np.asarray(self.P1, dtype=float)
        if P0.shape != (3, 3) or P1.shape != (3, 3, 4):
            raise InvalidArgumentError("background needs P0 of shape (3, 3) and P1 of shape (3, 3, 4)")
        if not self.patch_radius > 0:
            raise InvalidArgumentError("patch radius must be positive")
        object.__setattr__(self, "P0", P0)
        object.__setattr__(self, "P1", P1)

    @classmethod
    def constant(cls, P0: FloatArray, patch_radius: float = 1.0) -> BackgroundModel:
        return cls(np.asarray(P0, dtype=float), np.zeros((3, 3, 4)), patch_radius)

    def check_patch(self, x: FloatArray) -> None:
        if float(np.linalg.norm(x)) > self.patch_radius:
            raise OutOfPatchError(f"|x| = {np.linalg.norm(x):.6g} exceeds the patch radius {self.patch_radius}")

    def curvature_matrix(self, x: PointLike) -> FloatArray:
        point = as_point(x)
        self.check_patch(point)
        return self.P0 + self.P1 @ point

    def curvature_form(self, x: PointLike) -> FloatArray:
        return two_form_from_mat(self.curvature_matrix(x))

    def derivative_forms(self) -> FloatArray:
        """``G[rho] = d_rho F`` as an array of shape (4, 4, 4, 3)."""
        return np.stack([two_form_from_mat(self.P1[:, :, k]) for k in range(4)])

    def connection_form(self, x: PointLike, center: PointLike | None = None) -> FloatArray:
        """Radial-gauge connection about ``center`` reproducing the affine curvature.

        ``A_nu = 1/2 u^mu F_mu nu(c) + 1/3 u^mu u^rho d_rho F_mu nu`` with ``u = x - c``.
        """
        point, c = self._offsets(x, center)
        u = point - c
        F = self.curvature_form(c)
        G = self.derivative_forms()
        return 0.5 * np.einsum("m,mna->na", u, F) + np.einsum("m,r,rmna->na", u, u, G) / 3.0

    def connection_derivative(self, x: PointLike, center: PointLike | None = None) -> FloatArray:
        """``D[sigma, nu] = d_sigma A_nu``."""
        point, c = self._offsets(x, center)
        u = point - c
        F = self.curvature_form(c)
        G = self.derivative_forms()
        return 0.5 * F + (np.einsum("r,rsna->sna", u, G) + np.einsum("m,smna->sna", u, G)) / 3.0

    def exact_curvature(self, x: PointLike, center: PointLike | None = None) -> FloatArray:
        """Curvature of :meth:`connection_form`, quadratic terms included."""
        D = self.connection_derivative(x, center)
        A = self.connection_form(x, center)
        return D - D.transpose(1, 0, 2) + bracket(A, A)

    def bianchi_projected(self) -> BackgroundModel:
        """Same background with ``P1`` projected onto solutions of the linearized Bianchi identity."""
        basis = np.eye(36)
        constraints = np.stack([_bianchi_residual(basis[k].reshape(3, 3, 4)) for k in range(36)], axis=1)
        flat = self.P1.reshape(36)
        projected = flat - np.linalg.pinv(constraints) @ (constraints @ flat)
        return BackgroundModel(self.P0, projected.reshape(3, 3, 4), self.patch_radius)

    def bianchi_defect(self) -> float:
        return float(np.linalg.norm(_bianchi_residual(self.P1)))

    @property
    def R3(self) -> float:
        """Background length scale ``min(sigma_1(P0)^-1/2, |P0| / |P1|)``."""
        sigma1 = float(singular_values(self.P0)[0])
        if sigma1 == 0.0:
            raise InvalidArgumentError("background curvature vanishes at the origin")
        scale = sigma1**-0.5
        variation = float(np.linalg.norm(self.P1))
        if variation > 0.0:
            scale = min(scale, float(np.linalg.norm(self.P0)) / variation)
        return scale

    @property
    def s0(self) -> float:
        return float(singular_values(self.P0)[1])

    def _offsets(self, x: PointLike, center: PointLike | None) -> tuple[FloatArray, FloatArray]:
        point = as_point(x)
        c = np.zeros(4) if center is None else as_point(center)
        self.check_patch(point)
        self.check_patch(c)
        return point, c


def _bianchi_residual(P1: FloatArray) -> FloatArray:
    G = np.stack([two_form_from_mat(P1[:, :, k]) for k in range(4)])
    return np.concatenate([G[s, m, n] + G[m, n, s] + G[n, s, m] for s, m, n in BIANCHI_TRIPLES])


def background_connection_form(x: PointLike, background: BackgroundModel, center: PointLike | None = None) -> FloatArray:
    return background.connection_form(x, center)


@dataclass(frozen=True)
class CutoffScales:
    R1: float
    R2: float
    R3: float
    s0: float

    def validate(self, lam: float, inner: float = INNER_SEPARATION, outer: float = OUTER_SEPARATION) -> None:
        """Check ``R1^2 < inner lam R3`` and ``R2^2 > outer lam / sqrt(s0)``.

        :raises ScaleValidationError: If either inequality fails.
        """
        if not (lam > 0 and self.s0 > 0):
            raise ScaleValidationError(f"scale validation needs lam > 0 and s0 > 0 (lam={lam}, s0={self.s0})")
        if not self.R1**2 < inner * lam * self.R3:
            raise ScaleValidationError(f"R1^2 = {self.R1**2:.3e} is not below {inner * lam * self.R3:.3e}")
        if not self.R2**2 > outer * lam / math.sqrt(self.s0):
            raise ScaleValidationError(f"R2^2 = {self.R2**2:.3e} is not above {outer * lam / math.sqrt(self.s0):.3e}")

    @classmethod
    def for_bubble(
        cls,
        background: BackgroundModel,
        lam: float,
        r1_factor: float = DEFAULT_R1_FACTOR,
        r2_factor: float = DEFAULT_R2_FACTOR,
    ) -> CutoffScales:
        """Default scales ``R1 = r1 sqrt(lam R3)`` and ``R2 = r2 sqrt(lam / sqrt(s0))``."""
        R3, s0 = background.R3, background.s0
        if not s0 > 0:
            raise ScaleValidationError("second singular value of the background vanishes")
        scales = cls(r1_factor * math.sqrt(lam * R3), r2_factor * math.sqrt(lam / math.sqrt(s0)), R3, s0)
        scales.validate(lam)
        return scales


class Zone(str, enum.Enum):
    I_INTERIOR = "I_interior"
    II_INNER_SHOULDER = "II_inner_shoulder"
    III_PLATEAU = "III_plateau"
    IV_OUTER_SHOULDER = "IV_outer_shoulder"
    V_EXTERIOR = "V_exterior"


def zone_classify(x: PointLike, y: PointLike, scales: CutoffScales) -> Zone:
    """Zone of ``x`` relative to the bubble center ``y``; boundary points belong to the shoulders."""
    d = float(np.linalg.norm(as_point(x) - as_point(y)))
    if d < scales.R1 / 2:
        return Zone.I_INTERIOR
    if d <= 2 * scales.R1:
        return Zone.II_INNER_SHOULDER
    if d < scales.R2 / 2:
        return Zone.III_PLATEAU
    if d <= 2 * scales.R2:
        return Zone.IV_OUTER_SHOULDER
    return Zone.V_EXTERIOR


def fstd_regular_gauge(x: PointLike, lam: float = 1.0) -> FloatArray:
    """``Mat`` of the standard instanton centered at 0 in the regular gauge."""
    r2 = float(np.sum(as_point(x) ** 2))
    return lam**2 / (lam**2 + r2) ** 2 * np.eye(3)


def astd_regular_gauge(x: PointLike, lam: float = 1.0) -> FloatArray:
    """Regular-gauge connection ``Im(x-bar dx) / (lam^2 + |x|^2)``."""
    u = as_point(x)
    g = 1.0 / (lam**2 + float(np.sum(u**2)))
    A = np.empty((4, 3))
    A[0] = -u[1:] * g
    A[1:] = (u[0] * np.eye(3) + skew(u[1:])) * g
    return A


def _offset(x: PointLike, g: GluingData) -> tuple[FloatArray, float]:
    u = as_point(x) - g.y
    r2 = float(np.sum(u**2))
    if r2 == 0.0:
        raise SingularGaugeError("the exterior radial gauge is singular at the bubble center")
    return u, r2


def fstd_radial_gauge(x: PointLike, g: GluingData) -> FloatArray:
    """``Mat`` of the glued instanton in the exterior radial gauge.

    :param x: Evaluation point, distinct from the bubble center.
    :param g: Gluing data.
    :return: ``lam^2 / (lam^2 + r^2)^2 m^-1 rho((x - y) / r)``.
    :raises SingularGaugeError: At ``x = y``.
    """
    u, r2 = _offset(x, g)
    magnitude = g.lam**2 / (g.lam**2 + r2) ** 2
    return magnitude * g.m.T @ rho(Quaternion.from_array(u / math.sqrt(r2)))


def astd_radial_gauge(x: PointLike, g: GluingData) -> FloatArray:
    """Exterior radial-gauge connection ``lam^2 Im(u du-bar) / (r^2 (lam^2 + r^2))``, conjugated by ``g0``."""
    u, r2 = _offset(x, g)
    f = g.lam**2 / (r2 * (g.lam**2 + r2))
    A = np.empty((4, 3))
    A[0] = u[1:] * f
    A[1:] = (skew(u[1:]) - u[0] * np.eye(3)) * f
    return A @ g.m


def finite_difference_curvature(connection: Callable[[FloatArray], FloatArray], x: PointLike, h: float = 1e-4) -> FloatArray:
    """Curvature of a connection callable from central differences of step ``h``."""
    point = as_point(x)
    D = np.empty((4, 4, 3))
    for sigma in range(4):
        step = np.zeros(4)
        step[sigma] = h
        D[sigma] = (connection(point + step) - connection(point - step)) / (2.0 * h)
    A = connection(point)
    return D - D.transpose(1, 0, 2) + bracket(A, A)


@dataclass(frozen=True, eq=False)
class GluedCurvature:
    form: FloatArray

    @property
    def mat(self) -> FloatArray:
        return asd_mat(self.form)


@dataclass(frozen=True, eq=False)
class GluedConnectionModel:
    """``A' = beta_1 A0 + beta_2 A_std`` with ``beta_1 = beta(r / R1)``, ``beta_2 = 1 - beta(r / R2)``.

    The background connection is taken in the radial gauge about the bubble center.
    """

    background: BackgroundModel
    bubble: GluingData
    scales: CutoffScales
    t: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.t <= 1.0:
            raise InvalidArgumentError(f"interpolation parameter must lie in [0, 1], got {self.t}")

    def cutoffs(self, x: PointLike) -> tuple[float, float, FloatArray, FloatArray]:
        """``(beta_1, beta_2, d beta_1, d beta_2)`` at ``x``."""
        u = as_point(x) - self.bubble.y
        r = float(np.linalg.norm(u))
        radial = u / r if r > 0 else np.zeros(4)
        R1, R2 = self.scales.R1, self.scales.R2
        beta1 = cutoff(r / R1)
        beta2 = 1.0 - cutoff(r / R2)
        return beta1, beta2, cutoff_slope(r / R1) / R1 * radial, -cutoff_slope(r / R2) / R2 * radial

    def connection_form(self, x: PointLike) -> FloatArray:
        beta1, beta2, _, _ = self.cutoffs(x)
        A = np.zeros((4, 3))
        if beta1:
            A += beta1 * self.background.connection_form(x, self.bubble.y)
        if beta2:
            A += beta2 * astd_radial_gauge(x, self.bubble)
        return A

    def background_curvature(self, x: PointLike) -> FloatArray:
        return self.background.exact_curvature(x, self.bubble.y)

    def instanton_curvature(self, x: PointLike) -> FloatArray:
        return two_form_from_mat(fstd_radial_gauge(x, self.bubble))

    def zone(self, x: PointLike) -> Zone:
        return zone_classify(x, self.bubble.y, self.scales)

    def with_t(self, t: float) -> GluedConnectionModel:
        return GluedConnectionModel(self.background, self.bubble, self.scales, t)


def glued_curvature(x: PointLike, model: GluedConnectionModel) -> GluedCurvature:
    """Curvature of the glued connection from its term-by-term expansion.

    :raises SingularGaugeError: At the bubble center.
    """
    zone = model.zone(x)
    if zone is Zone.I_INTERIOR:
        return GluedCurvature(model.instanton_curvature(x))
    if zone is Zone.V_EXTERIOR:
        return GluedCurvature(model.background_curvature(x))
    beta1, beta2, db1, db2 = model.cutoffs(x)
    A0 = model.background.connection_form(x, model.bubble.y)
    As = astd_radial_gauge(x, model.bubble)
    F = (
        beta1 * model.background_curvature(x)
        + beta2 * model.instanton_curvature(x)
        + (beta1**2 - beta1) * bracket(A0, A0)
        + (beta2**2 - beta2) * bracket(As, As)
        + wedge_scalar(db1, A0)
        + wedge_scalar(db2, As)
        + beta1 * beta2 * (bracket(A0, As) + bracket(As, A0))
    )
    return GluedCurvature(F)


def interpolated_curvature_form(x: PointLike, model: GluedConnectionModel, t: float | None = None) -> FloatArray:
    """``F_t = t (F_A0 + F_std) + (1 - t) F_glued``; both endpoints are returned unmixed."""
    t = model.t if t is None else float(t)
    if not 0.0 <= t <= 1.0:
        raise InvalidArgumentError(f"interpolation parameter must lie in [0, 1], got {t}")
    if t == 0.0:
        return glued_curvature(x, model).form
    separate = model.background_curvature(x) + model.instanton_curvature(x)
    if t == 1.0:
        return separate
    return t * separate + (1.0 - t) * glued_curvature(x, model).form


def interpolated_curvature(x: PointLike, model: GluedConnectionModel, t: float | None = None) -> FloatArray:
    return asd_mat(interpolated_curvature_form(x, model, t))


def fiber_curvature_norm_sq(x: PointLike, a: PointLike, b: PointLike) -> float:
    """``|F_(a, b)(x)|^2 = 48 |a|^4 / (|a|^2 + |x - b|^2)^4``."""
    a2 = float(np.sum(as_point(a) ** 2))
    if a2 == 0.0:
        raise InvalidArgumentError("fiber parameter a must be nonzero")
    d2 = float(np.sum((as_point(x) - as_point(b)) ** 2))
    return 48.0 * a2**2 / (a2 + d2) ** 4
