"""Quadrature for the half-plane toy form and the fiber integral of the local mu-form.

Fiber points are pairs ``(a, b)`` of quaternions: ``|a|`` is the bubble scale
and ``b`` its center. After rescaling so that the marked points sit at 0 and
``2 = (2, 0, 0, 0)`` the fiber integral of ``mu_loc(p) ^ mu_loc(q)`` is

    I_p = 36 pi^-4 int 2^4 |a|^4 / ((|a|^2 + |b|^2)^4 (|a|^2 + |2 - b|^2)^4) d^4a d^4b,

which equals 1; the fiber value is ``I_p / 2`` because ``a`` double covers the
gluing angles.
"""

from __future__ import annotations

import enum
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate, special

from .algebra import Quaternion, as_point
from .exceptions import InvalidArgumentError
from .fields import fiber_curvature_norm_sq
from .intersect import ProblemConfig, count_model_intersections, sample_generic_background
from .types import SIMPLE_TYPE_FIBER_VALUE

if TYPE_CHECKING:
    from typing import Any, Callable, Iterable, Sequence

    from .types import FloatArray

logger = logging.getLogger(__name__)

MU_LOC_PREFACTOR = 2.0**4 / (8.0 * math.pi**2) ** 2
IP_PREFACTOR = 36.0 * 2.0**4 / math.pi**4
# 2 pi^2 (unit 3-sphere in a) times 4 pi (unit 2-sphere transverse to the axis through p and q)
REDUCED_PREFACTOR = IP_PREFACTOR * 8.0 * math.pi**3
# angular integral of cos^7 sin^2 over the quarter plane
POLAR_FACTOR = 0.5 * special.beta(4.0, 1.5)
# after integrating b over 3-spheres about p
REGION_PREFACTOR = 2304.0

MC_BLOCK_SIZE = 2**16
MC_MIN_SAMPLES = 10**5
MC_CENTERS = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    ]
)
MC_SCALES = np.array([1.0, 1.0, 1.5])


def worker_count() -> int:
    """Worker threads from the ``THREADS`` environment variable, 1 if unset."""
    value = os.environ.get("THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise InvalidArgumentError(f"THREADS must be an integer, got {value!r}") from None


class QuadratureMethod(str, enum.Enum):
    ADAPTIVE_NESTED = "adaptive_nested"
    MONTE_CARLO = "monte_carlo"
    RADIAL_1D = "radial_1d"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    err_estimate: float
    n_evals: int
    method: QuadratureMethod
    seed: int | None = None

    def serialize(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "error": self.err_estimate,
            "n_evals": self.n_evals,
            "method": self.method.value,
            "seed": self.seed,
        }


def _quad(func: Callable[[float], float], a: float, b: float, **kwargs: Any) -> tuple[float, float, int]:
    """``scipy.integrate.quad`` returning ``(value, abserr, neval)``; QUADPACK complaints are logged."""
    kwargs.setdefault("limit", 200)
    result = integrate.quad(func, a, b, full_output=1, **kwargs)
    value, abserr, info = result[0], result[1], result[2]
    if len(result) > 3:
        logger.debug("quad on [%g, %g]: %s", a, b, result[3])
    return float(value), float(abserr), int(info["neval"])


@dataclass(frozen=True)
class ToyConfig:
    """Offset ``L`` of the second angle form and the truncation box ``|x| <= x_max``, ``0 < lam <= lambda_max``."""

    L: float
    x_max: float = 1e9
    lambda_max: float = 1e9

    def __post_init__(self) -> None:
        if not (self.x_max > 0 and self.lambda_max > 0):
            raise InvalidArgumentError("toy truncation must be positive")


def toy_wedge_integral(cfg: ToyConfig) -> QuadratureResult:
    """Integral of ``d theta_0 ^ d theta_L`` over the truncated upper half-plane.

    In polar coordinates about the origin the radial integral is elementary; the
    angular one is done by adaptive quadrature. The error estimate includes the
    tail beyond the truncation.

    :param cfg: Toy configuration.
    :return: ``pi^2 / 2`` for ``L > 0`` up to truncation, exactly 0 for ``L = 0``.
    """
    L = cfg.L
    if L == 0:
        return QuadratureResult(0.0, 0.0, 0, QuadratureMethod.ADAPTIVE_NESTED)
    if L < 0:
        mirrored = toy_wedge_integral(ToyConfig(-L, cfg.x_max, cfg.lambda_max))
        return QuadratureResult(-mirrored.value, mirrored.err_estimate, mirrored.n_evals, mirrored.method)

    def r_max(phi: float) -> float:
        limits = []
        if math.cos(phi) != 0.0:
            limits.append(cfg.x_max / abs(math.cos(phi)))
        if math.sin(phi) > 0.0:
            limits.append(cfg.lambda_max / math.sin(phi))
        return min(limits)

    def radial(phi: float) -> float:
        c, s = L * math.cos(phi), L * math.sin(phi)
        return math.atan2(r_max(phi) - c, s) - math.atan2(-c, s)

    corners = sorted({math.atan2(cfg.lambda_max, cfg.x_max), math.atan2(cfg.lambda_max, -cfg.x_max)})
    value, abserr, neval = _quad(radial, 0.0, math.pi, points=corners, epsabs=1e-13, epsrel=1e-12)
    r_min = min(cfg.x_max, cfg.lambda_max)
    tail = 2.0 * L / (r_min - L) if r_min > L else math.inf
    return QuadratureResult(value, abserr + tail, neval, QuadratureMethod.ADAPTIVE_NESTED)


@dataclass(frozen=True, eq=False)
class FiberPoint:
    """Scale-gluing quaternion ``a`` and center ``b``."""

    a: FloatArray
    b: FloatArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        if not float(np.sum(self.a**2)) > 0:
            raise InvalidArgumentError("fiber parameter a must be nonzero")

    @property
    def lam(self) -> float:
        return float(np.linalg.norm(self.a))


def mu_loc_fiber_integrand(fp: FiberPoint, p: Quaternion | Iterable[float], q: Quaternion | Iterable[float]) -> float:
    """``2^4 (8 pi^2)^-2 |F(p)|^2 |F(q)|^2 |a|^-4`` in the rescaled frame."""
    norm_p = fiber_curvature_norm_sq(p, fp.a, fp.b)
    norm_q = fiber_curvature_norm_sq(q, fp.a, fp.b)
    return MU_LOC_PREFACTOR * norm_p * norm_q / fp.lam**4


def separation_volume_factor(
    p: Quaternion | Iterable[float], q: Quaternion | Iterable[float], a: Quaternion | Iterable[float]
) -> float:
    """``d^4 x_q`` on the vectors ``(q - p) tau_i a^-1``; equals ``|q - p|^4 |a|^-4``."""
    v = Quaternion.from_array(as_point(q) - as_point(p))
    a_inv = Quaternion.from_array(as_point(a)).inverse()
    basis = (Quaternion(1.0), Quaternion(0.0, 1.0), Quaternion(0.0, 0.0, 1.0), Quaternion(0.0, 0.0, 0.0, 1.0))
    columns = [(v * tau * a_inv).as_array() for tau in basis]
    return float(np.linalg.det(np.stack(columns, axis=1)))


def _poles(rho: float) -> list[complex]:
    return [1j * rho, -1j * rho, 2 + 1j * rho, 2 - 1j * rho]


def _residue(center: complex, others: Sequence[complex]) -> complex:
    """Residue of ``prod (z - d)^-4`` at a fourth-order pole."""
    H = 1.0 + 0j
    g1 = g2 = g3 = 0j
    for d in others:
        w = center - d
        H *= w**-4
        g1 += -4.0 / w
        g2 += 4.0 / w**2
        g3 += -8.0 / w**3
    return H * (g3 + 3.0 * g1 * g2 + g1**3) / 6.0


def z_integral(rho_sq: float, method: str = "quad") -> float:
    """``int dz / ((rho^2 + z^2)^4 (rho^2 + (z - 2)^2)^4)`` over the real line.

    :param rho_sq: Squared distance from the axis through the marked points, positive.
    :param method: ``"quad"`` for adaptive quadrature, ``"residues"`` for the two upper poles.
    """
    if not rho_sq > 0:
        raise InvalidArgumentError("z_integral needs rho^2 > 0")
    if method == "residues":
        rho = math.sqrt(rho_sq)
        poles = _poles(rho)
        upper = (poles[0], poles[2])
        total = sum(_residue(c, [d for d in poles if d != c]) for c in upper)
        return float((2j * math.pi * total).real)
    if method != "quad":
        raise InvalidArgumentError(f"unknown z_integral method {method!r}")

    def integrand(z: float) -> float:
        return 1.0 / ((rho_sq + z * z) ** 4 * (rho_sq + (z - 2.0) ** 2) ** 4)

    pieces = [(-math.inf, 0.0), (0.0, 2.0), (2.0, math.inf)]
    return sum(_quad(integrand, a, b, epsabs=0.0, epsrel=1e-11)[0] for a, b in pieces)


def integrate_Ip_reduced(inner: str = "quad") -> QuadratureResult:
    """``I_p`` by nested quadrature after integrating out all angles.

    With ``rho^2 = lam^2 + r^2`` the integral becomes
    ``REDUCED_PREFACTOR * POLAR_FACTOR * int_0^inf rho^10 Z(rho^2) d rho``.
    """
    calls = [0]

    def radial(rho: float) -> float:
        if rho < 1e-8:
            return 0.0
        calls[0] += 1
        return rho**10 * z_integral(rho * rho, inner)

    head = _quad(radial, 0.0, 1.0, epsabs=0.0, epsrel=1e-10)
    tail = _quad(radial, 1.0, math.inf, epsabs=0.0, epsrel=1e-10)
    prefactor = REDUCED_PREFACTOR * POLAR_FACTOR
    value = prefactor * (head[0] + tail[0])
    error = prefactor * (head[1] + tail[1]) + 1e-9 * abs(value)
    logger.debug("integrate_Ip_reduced: %d radial evaluations", calls[0])
    return QuadratureResult(value, error, calls[0], QuadratureMethod.ADAPTIVE_NESTED)


def ip_closed_form() -> QuadratureResult:
    """``I_p`` from the convolution identity for ``|X|^-8 * |X|^-8`` in twelve dimensions."""
    kernel = math.pi**6 * special.gamma(2.0) ** 3 / special.gamma(4.0) ** 3 * 2.0**-4
    sphere = 2.0 * math.pi**5.5 / special.gamma(5.5)
    value = REDUCED_PREFACTOR * POLAR_FACTOR * kernel / sphere
    return QuadratureResult(float(value), 0.0, 0, QuadratureMethod.CLOSED_FORM)


def _ip_integrand(a: FloatArray, b: FloatArray) -> FloatArray:
    a2 = np.sum(a**2, axis=1)
    to_p = a2 + np.sum(b**2, axis=1)
    shifted = b.copy()
    shifted[:, 0] -= 2.0
    to_q = a2 + np.sum(shifted**2, axis=1)
    return IP_PREFACTOR * a2**2 / (to_p**4 * to_q**4)


def _proposal_density(X: FloatArray) -> FloatArray:
    """Equal-weight mixture of radial profiles ``36 s^4 / (pi^4 R^4 (s^2 + R^2)^4)``."""
    density = np.zeros(len(X))
    for center, s in zip(MC_CENTERS, MC_SCALES):
        R2 = np.sum((X - center) ** 2, axis=1)
        density += 36.0 * s**4 / (math.pi**4 * R2**2 * (s * s + R2) ** 4)
    return density / len(MC_SCALES)


def _block_generator(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, stream, index]))


def _ip_block(seed: int, index: int, size: int) -> tuple[float, float]:
    rng = _block_generator(seed, 0, index)
    component = rng.integers(0, len(MC_SCALES), size)
    direction = rng.standard_normal((size, 8))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    u = rng.beta(2.0, 2.0, size)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        radius = MC_SCALES[component] * np.sqrt(u / (1.0 - u))
        X = MC_CENTERS[component] + radius[:, None] * direction
        weights = _ip_integrand(X[:, :4], X[:, 4:]) / _proposal_density(X)
    weights = np.where(np.isfinite(weights), weights, 0.0)
    return float(np.sum(weights)), float(np.sum(weights**2))


def integrate_Ip_mc(seed: int, n_samples: int = 10**7, workers: int | None = None) -> QuadratureResult:
    """Importance-sampled Monte Carlo estimate of ``I_p`` over ``R^8``.

    Samples are drawn in blocks, each from its own Philox counter, and block sums
    are merged in index order, so the result does not depend on ``workers``.

    :param seed: Philox key.
    :param n_samples: Number of samples, at least ``1e5``.
    :param workers: Thread count, defaults to :func:`worker_count`.
    :return: Estimate with its standard error.
    """
    if n_samples < MC_MIN_SAMPLES:
        raise InvalidArgumentError(f"Monte Carlo needs at least {MC_MIN_SAMPLES} samples")
    sizes = [MC_BLOCK_SIZE] * (n_samples // MC_BLOCK_SIZE)
    if n_samples % MC_BLOCK_SIZE:
        sizes.append(n_samples % MC_BLOCK_SIZE)
    workers = worker_count() if workers is None else workers
    with ThreadPoolExecutor(max_workers=workers) as executor:
        blocks = list(executor.map(lambda item: _ip_block(seed, *item), enumerate(sizes)))
    total = sum(block[0] for block in blocks)
    total_sq = sum(block[1] for block in blocks)
    mean = total / n_samples
    variance = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    logger.debug("integrate_Ip_mc: %d blocks on %d workers", len(sizes), workers)
    return QuadratureResult(mean, math.sqrt(variance / n_samples), n_samples, QuadratureMethod.MONTE_CARLO, seed)


@dataclass(frozen=True)
class FiberRegion:
    """``lambda_min <= |a| <= lambda_max`` and ``|b| <= center_coeff |a|^center_power`` in the rescaled frame."""

    lambda_min: float
    lambda_max: float
    center_coeff: float = math.inf
    center_power: float = 0.0

    @classmethod
    def exhaustion(cls, L: float, n0: float = 1.0) -> FiberRegion:
        """``L <= |a| <= L^-0.8`` and ``|b| <= n0 L^-1/2 |a|^1/2``."""
        if not L > 0:
            raise InvalidArgumentError(f"exhaustion parameter must be positive, got {L}")
        return cls(L, L**-0.8, n0 / math.sqrt(L), 0.5)

    @property
    def is_empty(self) -> bool:
        return not (self.lambda_max > self.lambda_min and self.lambda_max > 0 and self.center_coeff > 0)

    def center_bound(self, lam: float) -> float:
        return self.center_coeff * lam**self.center_power

    def serialize(self) -> dict[str, Any]:
        return {
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "center_coeff": self.center_coeff,
            "center_power": self.center_power,
        }


def _region_density(lam: float, rho: float) -> float:
    """Integrand in ``(|a|, |b|)`` after integrating over the directions of ``a`` and ``b``."""
    A = lam * lam + rho * rho + 4.0
    near = lam * lam + rho * rho
    far = (lam * lam + (rho - 2.0) ** 2) * (lam * lam + (rho + 2.0) ** 2)
    return REGION_PREFACTOR * lam**7 * rho**3 * A / (near**4 * far**2.5)


def _region_integral(region: FiberRegion) -> tuple[float, float, int]:
    calls = [0]

    def slab(log_lam: float) -> float:
        lam = math.exp(log_lam)
        bound = region.center_bound(lam)
        density = lambda rho: _region_density(lam, rho)  # noqa: E731
        if math.isinf(bound):
            head = _quad(density, 0.0, 4.0, points=[min(lam, 1.0), 2.0], epsabs=0.0, epsrel=1e-10)
            rest = _quad(density, 4.0, math.inf, epsabs=0.0, epsrel=1e-10)
            value, neval = head[0] + rest[0], head[2] + rest[2]
        else:
            points = [x for x in (min(lam, bound / 2.0), 2.0) if 0.0 < x < bound]
            value, _, neval = _quad(density, 0.0, bound, points=points or None, epsabs=0.0, epsrel=1e-10)
        calls[0] += neval
        return lam * value

    lo = math.log(max(region.lambda_min, 1e-12 * region.lambda_max))
    hi = math.log(region.lambda_max)
    value, abserr, _ = _quad(slab, lo, hi, epsabs=0.0, epsrel=1e-9)
    return value, abserr, calls[0]


def truncated_fiber_integral(L: float | None = None, truncation: FiberRegion | None = None, n0: float = 1.0) -> QuadratureResult:
    """Fiber integral of the local form over a truncated region, by default the exhaustion set for ``L``."""
    if truncation is None:
        if L is None or not L > 0:
            raise InvalidArgumentError("truncated_fiber_integral needs L > 0 or an explicit region")
        truncation = FiberRegion.exhaustion(L, n0)
    if truncation.is_empty:
        return QuadratureResult(0.0, 0.0, 0, QuadratureMethod.ADAPTIVE_NESTED)
    value, abserr, calls = _region_integral(truncation)
    return QuadratureResult(value, abserr, calls, QuadratureMethod.ADAPTIVE_NESTED)


@dataclass(eq=False)
class ConcentrationProfile:
    L: float
    edges: FloatArray
    mass: FloatArray
    median_lambda: float

    @property
    def total(self) -> float:
        return float(np.sum(self.mass))

    def serialize(self) -> dict[str, Any]:
        return {
            "L": self.L,
            "edges": self.edges.tolist(),
            "mass": self.mass.tolist(),
            "median_lambda": self.median_lambda,
            "total": self.total,
        }


def concentration_profile(L: float, n_bins: int = 24, lambda0: float = 1.0, lam_min_factor: float = 1e-3) -> ConcentrationProfile:
    """Mass of the fiber integrand binned by bubble scale, marked points ``2 L`` apart.

    Scales are in unrescaled coordinates, truncated at ``lambda0`` with centers within ``lambda0``.
    """
    if not L > 0:
        raise InvalidArgumentError(f"L must be positive, got {L}")
    edges = np.geomspace(lam_min_factor * L, lambda0, n_bins + 1)
    mass = np.array(
        [truncated_fiber_integral(truncation=FiberRegion(lo / L, hi / L, lambda0 / L, 0.0)).value for lo, hi in zip(edges, edges[1:])]
    )
    cumulative = np.concatenate(([0.0], np.cumsum(mass)))
    half = 0.5 * cumulative[-1]
    k = int(np.searchsorted(cumulative, half)) - 1
    k = min(max(k, 0), n_bins - 1)
    fraction = (half - cumulative[k]) / mass[k] if mass[k] > 0 else 0.0
    median = math.exp(math.log(edges[k]) + fraction * (math.log(edges[k + 1]) - math.log(edges[k])))
    return ConcentrationProfile(L, edges, mass, median)


@dataclass(eq=False)
class LimitOrderStudy:
    coupling: str
    rows: list[dict[str, float]]

    @property
    def values(self) -> list[float]:
        return [row["value"] for row in self.rows]

    def serialize(self) -> dict[str, Any]:
        return {"coupling": self.coupling, "rows": self.rows}


def limit_order_study(
    lambda0_values: Sequence[float] = (1e-1, 1e-2, 1e-3),
    L: float = 0.1,
    coupling: str = "fixed",
    alpha_prime: float = 0.5,
    coupling_constant: float = 1.0,
) -> LimitOrderStudy:
    """Fiber integral below the scale cutoff ``lambda0`` for shrinking ``lambda0``.

    ``coupling="fixed"`` keeps the separation ``2 L``; ``"coupled"`` sets
    ``L = coupling_constant * lambda0^(1 + alpha_prime)``.
    """
    if coupling not in ("fixed", "coupled"):
        raise InvalidArgumentError(f"unknown coupling {coupling!r}")
    rows = []
    for lambda0 in lambda0_values:
        L_eff = L if coupling == "fixed" else coupling_constant * lambda0 ** (1.0 + alpha_prime)
        top = lambda0 / L_eff
        result = truncated_fiber_integral(truncation=FiberRegion(1e-6 * top, top))
        rows.append({"lambda0": float(lambda0), "L": float(L_eff), "value": result.value, "error": result.err_estimate})
    return LimitOrderStudy(coupling, rows)


def angular_factor_audit(seed: int = 0, n_samples: int = 2**26, block_size: int = 2**20) -> dict[str, dict[str, float]]:
    """Hit-or-miss estimates of the areas of the unit 3-sphere and 2-sphere."""
    exact = {"S3": 2.0 * math.pi**2, "S2": 4.0 * math.pi}
    audit = {}
    for stream, (name, dim) in enumerate((("S3", 4), ("S2", 3))):
        hits = 0
        done = 0
        index = 0
        while done < n_samples:
            size = min(block_size, n_samples - done)
            rng = _block_generator(seed, stream + 1, index)
            points = rng.uniform(-1.0, 1.0, (size, dim))
            hits += int(np.count_nonzero(np.sum(points**2, axis=1) <= 1.0))
            done += size
            index += 1
        area = dim * 2.0**dim * hits / n_samples
        audit[name] = {"estimate": area, "exact": exact[name], "relative_error": abs(area / exact[name] - 1.0)}
    return audit


@dataclass(eq=False)
class FiberLimitReport:
    ip: QuadratureResult
    fiber_limit: float
    coincident_value: float

    @property
    def simple_type_ratio(self) -> float:
        return self.fiber_limit / SIMPLE_TYPE_FIBER_VALUE

    @property
    def fiber_label(self) -> str:
        return str(Fraction(self.fiber_limit).limit_denominator(64))

    @property
    def ratio_label(self) -> str:
        return str(Fraction(self.simple_type_ratio).limit_denominator(64))

    def serialize(self) -> dict[str, Any]:
        return {
            "ip": self.ip.serialize(),
            "fiber_limit": self.fiber_limit,
            "fiber_limit_label": self.fiber_label,
            "coincident_value": self.coincident_value,
            "simple_type_value": SIMPLE_TYPE_FIBER_VALUE,
            "ratio": self.simple_type_ratio,
            "ratio_label": self.ratio_label,
        }


def fiber_limit_report(ip: QuadratureResult | None = None) -> FiberLimitReport:
    """Fiber limit ``I_p / 2``, its value at coincident points and its share of the simple-type value.

    The local form carries the factor ``d^4 x_q = |q - p|^4 |a|^-4``, which vanishes
    identically at ``q = p``. ``coincident_value`` is therefore 0 for every ``I_p``; it is
    reported next to the nonzero limit because the fiber integral is discontinuous at
    the diagonal.
    """
    ip = integrate_Ip_reduced() if ip is None else ip
    origin = np.zeros(4)
    coincident = separation_volume_factor(origin, origin, np.array([1.0, 0.0, 0.0, 0.0]))
    return FiberLimitReport(ip, 0.5 * ip.value, abs(coincident) * ip.value)


@dataclass(eq=False)
class ConcentrationContrast:
    solution_exponent: float
    integrand_exponent: float
    rows: list[dict[str, float]]

    def serialize(self) -> dict[str, Any]:
        return {
            "solution_lambda_exponent": self.solution_exponent,
            "integrand_lambda_exponent": self.integrand_exponent,
            "rows": self.rows,
        }


def concentration_contrast(L_values: Sequence[float] = (1e-2, 3e-3, 1e-3), seed: int = 0) -> ConcentrationContrast:
    """Fitted exponents of the intersection-solution scale and the median integrand scale against ``L``."""
    background = sample_generic_background(np.random.default_rng(seed))
    rows = []
    for L in L_values:
        report = count_model_intersections(ProblemConfig(L, background), seed)
        solution_lam = float(np.mean([sol.lam for sol in report.solutions]))
        rows.append({"L": float(L), "solution_lambda": solution_lam, "median_lambda": concentration_profile(L).median_lambda})
    log_L = np.log([row["L"] for row in rows])
    solution_exponent = float(np.polyfit(log_L, np.log([row["solution_lambda"] for row in rows]), 1)[0])
    integrand_exponent = float(np.polyfit(log_L, np.log([row["median_lambda"] for row in rows]), 1)[0])
    return ConcentrationContrast(solution_exponent, integrand_exponent, rows)
