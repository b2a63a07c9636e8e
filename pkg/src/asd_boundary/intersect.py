"""Counting reducible points of the background plus a standard instanton.

With ``p = (-L, 0, 0, 0)`` and ``q = (+L, 0, 0, 0)`` the sum ``F0 + F_std`` is
reducible at both points exactly when the instanton magnitude equals
``sigma_2`` of the background there and its direction matches one of the two
branches of the rank-one decomposition. The magnitude conditions put ``y`` on
an ellipsoid and fix ``lam`` in terms of ``y_I``; the direction conditions
reduce to ``rho(g(y)) = M_p^T M_q``, three equations in the three unknowns
``y_I``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
from scipy import optimize

from .algebra import Quaternion, as_point, quat_product, random_rotation, rho, singular_values, so3_exp, so3_log
from .exceptions import (
    CertificateError,
    DegenerateInputError,
    IncompleteCountError,
    InvalidArgumentError,
    NonContractionError,
    SingularGaugeError,
)
from .fields import BackgroundModel, GluingData, fstd_radial_gauge
from .orientation import solution_sign
from .reducible import classify_spectrum, decompose_rank1, default_gap_tol, rank_tolerance
from .types import SIMPLE_TYPE_COUNT

if TYPE_CHECKING:
    from typing import Any, Callable, Iterable, Sequence

    from .reducible import ReducibleDecomposition
    from .types import FloatArray

logger = logging.getLogger(__name__)

SOLVE_TOL = 1e-11
JITTERS_PER_SEED = 8
DEDUP_FACTOR = 1e-6
# |z| beyond which a multistart iterate is abandoned
ESCAPE_RADIUS = 1e6

GENERIC = "generic"
DEGENERATE_ALPHA_GT_1 = "degenerate_alpha_gt_1"
DEGENERATE_ALPHA_LT_1 = "degenerate_alpha_lt_1"

EXPECTED_COUNTS = {GENERIC: 6, DEGENERATE_ALPHA_GT_1: 4, DEGENERATE_ALPHA_LT_1: 8}


@dataclass(frozen=True, eq=False)
class ProblemConfig:
    """Two marked points at ``(-L, 0, 0, 0)`` and ``(+L, 0, 0, 0)`` and the admissible bubble scale ``K L^alpha``."""

    L: float
    background: BackgroundModel
    K: float = 1.0
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if not self.L > 0:
            raise InvalidArgumentError(f"half-separation L must be positive, got {self.L}")
        if not self.K > 0:
            raise InvalidArgumentError(f"K must be positive, got {self.K}")
        if not 0.0 < self.alpha < 2.0:
            raise InvalidArgumentError(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.L >= self.background.patch_radius:
            raise InvalidArgumentError("marked points lie outside the background patch")

    @property
    def p(self) -> FloatArray:
        return np.array([-self.L, 0.0, 0.0, 0.0])

    @property
    def q(self) -> FloatArray:
        return np.array([self.L, 0.0, 0.0, 0.0])

    @property
    def lam_max(self) -> float:
        return self.K * self.L**self.alpha

    def with_L(self, L: float) -> ProblemConfig:
        return replace(self, L=L)

    def serialize(self) -> dict[str, Any]:
        return {"L": self.L, "K": self.K, "alpha": self.alpha}


@dataclass(frozen=True)
class DerivedScales:
    L: float
    s_p: float
    s_q: float
    s_m: float
    Delta: float
    R_Kalpha: float
    lam_max: float

    @property
    def a(self) -> float:
        return 1.0 + self.Delta**2 / 16.0

    @property
    def vertex_lam(self) -> float:
        """Largest small root, reached where the discriminant vanishes."""
        return 1.0 / (2.0 * self.a * math.sqrt(self.s_m))


def derived_scales(cfg: ProblemConfig, require_generic: bool = True) -> DerivedScales:
    """Magnitudes at the marked points and the admissible imaginary radius.

    :param cfg: Problem configuration.
    :param require_generic: Reject backgrounds whose spectrum at the origin is degenerate.
    :return: Derived scales.
    :raises DegenerateInputError: If ``require_generic`` and the origin spectrum is degenerate.
    """
    background = cfg.background
    if require_generic:
        spectrum = classify_spectrum(background.P0, default_gap_tol(background.P0))
        if not spectrum.is_generic:
            raise DegenerateInputError("model count needs a generic background at the origin", spectrum)
    s_p = float(singular_values(background.curvature_matrix(cfg.p))[1])
    s_q = float(singular_values(background.curvature_matrix(cfg.q))[1])
    if not (s_p > 0 and s_q > 0):
        raise InvalidArgumentError("second singular value vanishes at a marked point")
    inv_mean = 0.5 * (1.0 / math.sqrt(s_p) + 1.0 / math.sqrt(s_q))
    s_m = inv_mean**-2
    Delta = (1.0 / math.sqrt(s_p) - 1.0 / math.sqrt(s_q)) / cfg.L
    a = 1.0 + Delta**2 / 16.0
    lam_max = cfg.lam_max
    if lam_max >= 1.0 / (2.0 * a * math.sqrt(s_m)):
        radius_sq = 1.0 / (4.0 * a * s_m) - cfg.L**2
    else:
        radius_sq = lam_max / math.sqrt(s_m) - a * lam_max**2 - cfg.L**2
    return DerivedScales(cfg.L, s_p, s_q, s_m, Delta, math.sqrt(max(radius_sq, 0.0)), lam_max)


class EllipsoidRoot(NamedTuple):
    lam: float
    y0: float


def ellipsoid_solve(scales: DerivedScales, yI: FloatArray) -> EllipsoidRoot | None:
    """Small root of ``lam^2 (1 + Delta^2 / 16) - lam / sqrt(s_m) + L^2 + |y_I|^2 = 0``.

    Returns ``None`` when the quadratic has no real root.
    """
    a = scales.a
    c = scales.L**2 + float(np.sum(np.asarray(yI, dtype=float) ** 2))
    b = 1.0 / math.sqrt(scales.s_m)
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return None
    lam = 2.0 * c / (b + math.sqrt(disc))
    return EllipsoidRoot(lam, lam * scales.Delta / 4.0)


def g_of_y(y: Quaternion | Iterable[float], L: float) -> Quaternion:
    """``conj(y - p) (y - q) / |(y - p)(y - q)|``.

    :raises SingularGaugeError: At ``y = p`` or ``y = q``.
    """
    point = as_point(y)
    from_p = Quaternion.from_array(point + np.array([L, 0.0, 0.0, 0.0]))
    from_q = Quaternion.from_array(point - np.array([L, 0.0, 0.0, 0.0]))
    if from_p.norm_sq() == 0.0 or from_q.norm_sq() == 0.0:
        raise SingularGaugeError("g(y) is undefined at the marked points")
    return quat_product(from_p.conjugate(), from_q).normalized()


@dataclass(frozen=True, eq=False)
class IntersectionSolution:
    gluing: GluingData
    pair: tuple[int, int]
    residual: float
    y0: float
    yI: FloatArray
    targets: tuple[FloatArray, FloatArray]
    magnitudes: tuple[float, float]
    sign: int = 0

    @property
    def y(self) -> FloatArray:
        return self.gluing.y

    @property
    def lam(self) -> float:
        return self.gluing.lam

    @property
    def m(self) -> FloatArray:
        return self.gluing.m

    def serialize(self) -> dict[str, Any]:
        return {
            "pair": list(self.pair),
            "y": self.y.tolist(),
            "lambda": self.lam,
            "m": self.m.tolist(),
            "residual": self.residual,
            "sign": self.sign,
        }


@dataclass(eq=False)
class CountReport:
    solutions: list[IntersectionSolution]
    classification: str
    config: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def total_signed_count(self) -> int:
        return sum(sol.sign for sol in self.solutions)

    @property
    def boundary_ratio(self) -> Fraction:
        return Fraction(self.total_signed_count, SIMPLE_TYPE_COUNT)

    @property
    def ratio_label(self) -> str:
        return f"{self.total_signed_count}/{SIMPLE_TYPE_COUNT}"

    def pair_counts(self) -> dict[str, int]:
        counts = {f"{i}{j}": 0 for i, j in itertools.product(range(2), repeat=2)}
        for sol in self.solutions:
            counts[f"{sol.pair[0]}{sol.pair[1]}"] += 1
        return counts

    def serialize(self) -> dict[str, Any]:
        return {
            "classification": self.classification,
            "config": self.config,
            "solutions": [sol.serialize() for sol in self.solutions],
            "pair_counts": self.pair_counts(),
            "total_signed_count": self.total_signed_count,
            "boundary_ratio": self.ratio_label,
            "diagnostics": self.diagnostics,
        }


def expected_count(classification: str) -> int:
    try:
        return EXPECTED_COUNTS[classification]
    except KeyError:
        raise InvalidArgumentError(f"unknown classification {classification!r}") from None


def center_from_z(scales: DerivedScales, z: FloatArray) -> tuple[FloatArray, float, bool]:
    """Bubble center and scale for ``y_I = L z``; past the discriminant the vertex scale is used."""
    yI = scales.L * np.asarray(z, dtype=float)
    root = ellipsoid_solve(scales, yI)
    lam = scales.vertex_lam if root is None else root.lam
    y = np.concatenate(([lam * scales.Delta / 4.0], yI))
    return y, lam, root is not None


def direction_residual(scales: DerivedScales, target: FloatArray, z: FloatArray) -> FloatArray:
    """``log(T^T rho(g(y)))`` as a function of ``z = y_I / L``."""
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)) or float(np.linalg.norm(z)) > ESCAPE_RADIUS:
        return np.full(3, math.pi)
    y, _, _ = center_from_z(scales, z)
    try:
        g = g_of_y(y, scales.L)
    except SingularGaugeError:
        return np.full(3, math.pi)
    return so3_log(target.T @ rho(g))


def solve_center(scales: DerivedScales, target: FloatArray, z0: FloatArray) -> tuple[FloatArray, float] | None:
    """Newton-type solve of the direction equations from ``z0``; ``None`` if it does not converge."""
    with np.errstate(all="ignore"):
        result = optimize.root(lambda z: direction_residual(scales, target, z), z0, method="hybr", options={"xtol": 1e-14})
    residual = float(np.linalg.norm(direction_residual(scales, target, result.x)))
    if not residual < SOLVE_TOL:
        return None
    return np.asarray(result.x, dtype=float), residual


def seed_points(target: FloatArray) -> list[FloatArray]:
    """Exact and asymptotic seeds for both root families, in units of ``L``."""
    log = so3_log(target)
    theta = float(np.linalg.norm(log))
    if theta < 1e-12:
        return [np.zeros(3)]
    axis = log / theta
    seeds = []
    for direction in (axis, -axis):
        seeds.append(-direction * math.tan(theta / 4.0))
        seeds.append(-direction * theta / 4.0)
        seeds.append(direction / math.tan(theta / 4.0))
        seeds.append(direction * 4.0 / theta)
    return seeds


def _jittered(seeds: Sequence[FloatArray], rng: np.random.Generator) -> list[FloatArray]:
    starts = []
    for base in seeds:
        starts.append(base)
        scale = 0.1 * (float(np.linalg.norm(base)) + 0.1)
        for _ in range(JITTERS_PER_SEED - 1):
            starts.append(base + scale * rng.standard_normal(3))
    return starts


def branch_decompositions(cfg: ProblemConfig) -> tuple[list[ReducibleDecomposition], list[ReducibleDecomposition]]:
    return (
        decompose_rank1(cfg.background.curvature_matrix(cfg.p)),
        decompose_rank1(cfg.background.curvature_matrix(cfg.q)),
    )


def reducibility_certificate(cfg: ProblemConfig, sol: IntersectionSolution, gauges: tuple[FloatArray, FloatArray] | None = None) -> float:
    """Largest of ``sigma_2, sigma_3`` of ``F0 + F_std`` at both marked points, relative to the rank tolerance."""
    worst = 0.0
    for k, point in enumerate((cfg.p, cfg.q)):
        F0 = cfg.background.curvature_matrix(point)
        if gauges is not None:
            F0 = gauges[k] @ F0
        sv = singular_values(F0 + fstd_radial_gauge(point, sol.gluing))
        worst = max(worst, float(sv[1]) / rank_tolerance(F0))
    return worst


def build_solution(
    cfg: ProblemConfig,
    scales: DerivedScales,
    pair: tuple[int, int],
    targets: tuple[FloatArray, FloatArray],
    z: FloatArray,
    residual: float,
) -> IntersectionSolution:
    """Reconstruct ``(y, lam, m)`` with ``m = rho((p - y) / |p - y|) M_p^T``."""
    y, lam, _ = center_from_z(scales, z)
    from_y = cfg.p - y
    phi = Quaternion.from_array(from_y / np.linalg.norm(from_y))
    m = rho(phi) @ targets[0].T
    gluing = GluingData.from_rotation(y, lam, m)
    return IntersectionSolution(gluing, pair, residual, float(y[0]), y[1:].copy(), targets, (scales.s_p, scales.s_q))


def _is_admissible(scales: DerivedScales, z: FloatArray) -> bool:
    _, lam, has_root = center_from_z(scales, z)
    return has_root and lam < scales.lam_max and scales.L * float(np.linalg.norm(z)) < scales.R_Kalpha


def _deduplicate(points: list[tuple[FloatArray, float]]) -> list[tuple[FloatArray, float]]:
    unique: list[tuple[FloatArray, float]] = []
    for z, residual in points:
        if all(float(np.linalg.norm(z - other)) >= DEDUP_FACTOR for other, _ in unique):
            unique.append((z, residual))
    return unique


def solve_pair(
    scales: DerivedScales, target: FloatArray, rng: np.random.Generator
) -> tuple[list[tuple[FloatArray, float]], int]:
    """All distinct roots of one branch pair found by multistart, with the number of converged starts."""
    converged = []
    starts = _jittered(seed_points(target), rng)
    for start in starts:
        found = solve_center(scales, target, start)
        if found is not None:
            converged.append(found)
    unique = _deduplicate(converged)
    logger.debug("solve_pair: %d of %d starts converged, %d distinct roots", len(converged), len(starts), len(unique))
    return unique, len(converged)


def generic_pair_multiplicity(i: int, j: int) -> int:
    """Admissible roots of branch pair ``(i, j)`` for a generic background: one if matched, two if mixed."""
    return 1 if i == j else 2


def enumerate_solutions(
    cfg: ProblemConfig,
    scales: DerivedScales,
    seed: int,
    targets_at: Callable[[int, int], tuple[FloatArray, FloatArray]] | None = None,
    multiplicity: Callable[[int, int], int] | None = None,
) -> list[IntersectionSolution]:
    """Solve every branch pair and return the admissible solutions ordered by pair, then by ``y``.

    :param multiplicity: Number of admissible roots each branch pair must yield; unchecked if ``None``.
    :raises IncompleteCountError: If a branch pair yields no root at all, or fewer than ``multiplicity``.
    :raises CertificateError: If a branch pair yields more roots than ``multiplicity``.
    """
    decs_p, decs_q = branch_decompositions(cfg)
    solutions: list[IntersectionSolution] = []
    for i, j in itertools.product(range(2), repeat=2):
        targets = (decs_p[i].M, decs_q[j].M) if targets_at is None else targets_at(i, j)
        target = targets[0].T @ targets[1]
        roots, n_converged = solve_pair(scales, target, np.random.default_rng([seed, i, j]))
        if n_converged == 0:
            raise IncompleteCountError(f"no start converged for branch pair ({i}, {j})", solutions)
        pair_solutions = sorted(
            (build_solution(cfg, scales, (i, j), targets, z, residual) for z, residual in roots if _is_admissible(scales, z)),
            key=lambda sol: tuple(sol.y),
        )
        solutions.extend(pair_solutions)
        if multiplicity is None:
            continue
        expected = multiplicity(i, j)
        if len(pair_solutions) < expected:
            raise IncompleteCountError(
                f"branch pair ({i}, {j}) yielded {len(pair_solutions)} of {expected} admissible roots", solutions
            )
        if len(pair_solutions) > expected:
            raise CertificateError(f"branch pair ({i}, {j}) yielded {len(pair_solutions)} admissible roots, expected {expected}")
    return solutions


def _finalize(cfg: ProblemConfig, solutions: list[IntersectionSolution], classification: str) -> CountReport:
    signed = []
    certificate = 0.0
    for sol in solutions:
        ratio = reducibility_certificate(cfg, sol)
        if not ratio < 1.0:
            raise CertificateError(f"solution at y={sol.y.tolist()} fails the reducibility certificate")
        certificate = max(certificate, ratio)
        signed.append(replace(sol, sign=solution_sign(sol, cfg)))
    report = CountReport(signed, classification, cfg.serialize())
    report.diagnostics["max_certificate_ratio"] = certificate
    logger.debug("count: %d solutions, signed total %d", len(signed), report.total_signed_count)
    return report


def count_model_intersections(cfg: ProblemConfig, seed: int = 0) -> CountReport:
    """Signed count of reducible configurations for a generic background.

    :param cfg: Problem configuration.
    :param seed: Seed of the multistart jitter.
    :return: Count report, six solutions of sign +1 for small ``L``.
    :raises IncompleteCountError: If a branch pair yields fewer roots than :func:`generic_pair_multiplicity`.
    """
    scales = derived_scales(cfg)
    return _finalize(cfg, enumerate_solutions(cfg, scales, seed, multiplicity=generic_pair_multiplicity), GENERIC)


def count_degenerate(cfg: ProblemConfig, seed: int = 0) -> CountReport:
    """Count for a background with a degenerate spectrum at the origin that splits at the marked points."""
    if cfg.alpha == 1.0:
        raise InvalidArgumentError("degenerate backgrounds need alpha above or below 1")
    classification = DEGENERATE_ALPHA_GT_1 if cfg.alpha > 1.0 else DEGENERATE_ALPHA_LT_1
    scales = derived_scales(cfg, require_generic=False)
    return _finalize(cfg, enumerate_solutions(cfg, scales, seed), classification)


def sample_generic_background(rng: np.random.Generator, patch_radius: float = 1.0) -> BackgroundModel:
    """Constant background with well separated singular values in random frames."""
    s2 = rng.uniform(0.5, 1.5)
    s1 = s2 * rng.uniform(1.5, 3.0)
    s3 = s2 * rng.uniform(0.0, 0.5)
    sign = rng.choice([-1.0, 1.0])
    P0 = random_rotation(rng) @ np.diag([s1, s2, sign * s3]) @ random_rotation(rng).T
    return BackgroundModel.constant(P0, patch_radius)


def degenerate_background(splitting: float = 1.0, patch_radius: float = 1.0) -> BackgroundModel:
    """``sigma_1 = sigma_2`` at the origin, split along ``x0`` as ``diag(2 + c x0, 2 - c x0, 1)``."""
    P1 = np.zeros((3, 3, 4))
    P1[:, :, 0] = np.diag([splitting, -splitting, 0.0])
    return BackgroundModel(np.diag([2.0, 2.0, 1.0]), P1, patch_radius)


@dataclass(frozen=True, eq=False)
class HolonomyModel:
    """Synthetic holonomy ``H(y) = exp(skew(c L y_I))`` acting on the background from the left."""

    c_p: FloatArray
    c_q: FloatArray

    @classmethod
    def random(cls, strength: float, rng: np.random.Generator) -> HolonomyModel:
        if strength < 0:
            raise InvalidArgumentError("holonomy strength must be nonnegative")
        mats = []
        for _ in range(2):
            c = rng.standard_normal((3, 3))
            mats.append(strength * c / np.linalg.norm(c, 2))
        return cls(mats[0], mats[1])

    def gauges(self, y: FloatArray, L: float) -> tuple[FloatArray, FloatArray]:
        yI = L * np.asarray(y, dtype=float)[1:]
        return so3_exp(self.c_p @ yI), so3_exp(self.c_q @ yI)


# |delta y| <= HOLONOMY_SAFETY * 2 * strength * L^2 |y_I| * |J^-1| to first order in the target rotation
HOLONOMY_SAFETY = 2.0
JACOBIAN_STEP = 1e-7


def inverse_jacobian_norm(scales: DerivedScales, target: FloatArray, z: FloatArray) -> float:
    """Spectral norm of the inverse Jacobian of :func:`direction_residual` at ``z``, by central differences."""
    z = np.asarray(z, dtype=float)
    h = JACOBIAN_STEP * (1.0 + float(np.linalg.norm(z)))
    J = np.empty((3, 3))
    for k in range(3):
        step = np.zeros(3)
        step[k] = h
        J[:, k] = (direction_residual(scales, target, z + step) - direction_residual(scales, target, z - step)) / (2.0 * h)
    smallest = float(np.linalg.svd(J, compute_uv=False)[-1])
    if not smallest > 0:
        raise NonContractionError(f"direction equations are singular at z={z.tolist()}")
    return 1.0 / smallest


def holonomy_displacement_constant(cfg: ProblemConfig, solutions: Sequence[IntersectionSolution], holonomy_strength: float) -> float:
    """A priori bound ``C`` with ``|y(H) - y| <= C L |y_I|`` for holonomies of norm at most ``holonomy_strength``.

    A holonomy rotates each branch target by at most ``holonomy_strength * L |y_I|``, so the
    direction residual moves by twice that and the root by ``|J^-1|`` times the residual.
    """
    scales = derived_scales(cfg, require_generic=False)
    worst = max(
        (inverse_jacobian_norm(scales, sol.targets[0].T @ sol.targets[1], sol.yI / cfg.L) for sol in solutions),
        default=0.0,
    )
    return HOLONOMY_SAFETY * 2.0 * holonomy_strength * cfg.L * worst


def count_with_holonomy_model(
    cfg: ProblemConfig,
    holonomy_strength: float,
    seed: int = 0,
    max_iter: int = 50,
    tol: float = 1e-10,
) -> CountReport:
    """Count with ``y``-dependent branch targets ``H(y) M(0)``, solved by fixed-point iteration.

    The displacement constant of :func:`holonomy_displacement_constant` is fixed before the
    iteration; every moved solution must satisfy ``|y(H) - y| <= C L |y_I|``.

    :raises NonContractionError: If an iteration fails to contract.
    :raises CertificateError: If a moved solution is not reducible or exceeds the displacement bound.
    """
    base = count_model_intersections(cfg, seed)
    if holonomy_strength == 0:
        base.diagnostics["displacement_constant"] = 0.0
        base.diagnostics["displacement_ratios"] = [0.0] * len(base.solutions)
        return base
    model = HolonomyModel.random(holonomy_strength, np.random.default_rng([seed, 3]))
    scales = derived_scales(cfg)
    constant = holonomy_displacement_constant(cfg, base.solutions, holonomy_strength)
    solutions = []
    ratios = []
    for sol in base.solutions:
        M_p0, M_q0 = sol.targets
        z = sol.yI / cfg.L
        y = sol.y
        previous = math.inf
        for iteration in range(max_iter):
            H_p, H_q = model.gauges(y, cfg.L)
            targets = (H_p @ M_p0, H_q @ M_q0)
            found = solve_center(scales, targets[0].T @ targets[1], z)
            if found is None:
                raise NonContractionError(f"inner solve failed at iteration {iteration} for pair {sol.pair}")
            z_new, residual = found
            step = cfg.L * float(np.linalg.norm(z_new - z))
            z = z_new
            y, _, _ = center_from_z(scales, z)
            logger.debug("holonomy iteration %d: step %.3e", iteration, step)
            if step <= tol * cfg.L:
                break
            if step > 0.5 * previous:
                raise NonContractionError(f"step grew from {previous:.3e} to {step:.3e}")
            previous = step
        else:
            raise NonContractionError(f"no convergence within {max_iter} iterations")
        H_p, H_q = model.gauges(y, cfg.L)
        targets = (H_p @ M_p0, H_q @ M_q0)
        moved = build_solution(cfg, scales, sol.pair, targets, z, residual)
        if not reducibility_certificate(cfg, moved, (H_p, H_q)) < 1.0:
            raise CertificateError(f"holonomy solution for pair {sol.pair} fails the reducibility certificate")
        ratio = float(np.linalg.norm(moved.y - sol.y)) / (cfg.L * float(np.linalg.norm(sol.yI)))
        if not ratio <= constant:
            raise CertificateError(f"pair {sol.pair} moved by {ratio:.3e} L |y_I|, above the bound {constant:.3e}")
        ratios.append(ratio)
        solutions.append(replace(moved, sign=solution_sign(moved, cfg)))
    report = CountReport(solutions, GENERIC, {**cfg.serialize(), "holonomy_strength": holonomy_strength})
    report.diagnostics["displacement_constant"] = constant
    report.diagnostics["displacement_ratios"] = ratios
    return report


def solution_displacements(cfg: ProblemConfig, sol: IntersectionSolution, eps: float, axis: FloatArray) -> dict[str, float]:
    """Change of ``(m, y, lam)`` when ``M_p`` is rotated to ``M_p exp(eps axis)``."""
    if eps == 0:
        return {"m": 0.0, "y": 0.0, "lambda": 0.0}
    scales = derived_scales(cfg, require_generic=False)
    M_p = sol.targets[0] @ so3_exp(eps * np.asarray(axis, dtype=float))
    targets = (M_p, sol.targets[1])
    found = solve_center(scales, M_p.T @ targets[1], sol.yI / cfg.L)
    if found is None:
        raise NonContractionError(f"perturbed solve failed for eps={eps}")
    moved = build_solution(cfg, scales, sol.pair, targets, *found)
    return {
        "m": float(np.linalg.norm(moved.m - sol.m)),
        "y": float(np.linalg.norm(moved.y - sol.y)),
        "lambda": abs(moved.lam - sol.lam),
    }


@dataclass(eq=False)
class SensitivityScan:
    exponents: dict[str, tuple[float, float]]
    rows: list[dict[str, float]]

    def serialize(self) -> dict[str, Any]:
        return {
            "exponents": {name: {"eps": e, "L": l} for name, (e, l) in self.exponents.items()},
            "rows": self.rows,
        }


def sensitivity_scan(
    cfg: ProblemConfig,
    eps_list: Sequence[float] = (1e-4, 1e-3, 1e-2),
    L_values: Sequence[float] = (1e-2, 3e-3, 1e-3),
    seed: int = 0,
) -> SensitivityScan:
    """Fit ``log delta = a log eps + b log L + c`` for the near solution of branch pair (0, 1).

    The perturbation axis mixes the target rotation axis with a seeded random direction.
    """
    rng = np.random.default_rng([seed, 7])
    jitter = rng.standard_normal(3)
    jitter /= np.linalg.norm(jitter)
    rows = []
    for L in L_values:
        cfg_L = cfg.with_L(L)
        report = count_model_intersections(cfg_L, seed)
        mixed = [sol for sol in report.solutions if sol.pair == (0, 1)]
        sol = min(mixed, key=lambda s: float(np.linalg.norm(s.yI)))
        log = so3_log(sol.targets[0].T @ sol.targets[1])
        axis = log / np.linalg.norm(log) + 0.5 * jitter
        axis /= np.linalg.norm(axis)
        for eps in eps_list:
            rows.append({"eps": float(eps), "L": float(L), **solution_displacements(cfg_L, sol, eps, axis)})
    exponents = {}
    for name in ("m", "y", "lambda"):
        usable = [row for row in rows if row["eps"] > 0 and row[name] > 0]
        if len(usable) < 3:
            exponents[name] = (0.0, 0.0)
            continue
        design = np.array([[math.log(row["eps"]), math.log(row["L"]), 1.0] for row in usable])
        values = np.array([math.log(row[name]) for row in usable])
        coeffs = np.linalg.lstsq(design, values, rcond=None)[0]
        exponents[name] = (float(coeffs[0]), float(coeffs[1]))
    return SensitivityScan(exponents, rows)


@dataclass(eq=False)
class BoundarySummary:
    counts: list[int]
    mean_count: float | None
    contribution: int | None

    @property
    def ratio_label(self) -> str | None:
        if self.contribution is None:
            return None
        return f"{self.contribution}/{SIMPLE_TYPE_COUNT}"

    @property
    def interior_requirement(self) -> int | None:
        if self.contribution is None:
            return None
        return SIMPLE_TYPE_COUNT - self.contribution

    def serialize(self) -> dict[str, Any]:
        return {
            "counts": self.counts,
            "n_backgrounds": len(self.counts),
            "mean_count": self.mean_count,
            "contribution_per_background": self.contribution,
            "boundary_ratio": self.ratio_label,
            "interior_requirement": self.interior_requirement,
        }


def boundary_report(reports: Sequence[CountReport]) -> BoundarySummary:
    """Aggregate signed counts over backgrounds into the boundary share of the simple-type count."""
    counts = [report.total_signed_count for report in reports]
    if not counts:
        return BoundarySummary([], None, None)
    contribution = counts[0] if len(set(counts)) == 1 else None
    return BoundarySummary(counts, float(np.mean(counts)), contribution)
