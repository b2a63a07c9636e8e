"""Continuation of the model solutions through the interpolated family ``F_t``.

Each solution of the model count is tracked from ``t = 1`` (background plus
instanton, no cross terms) down to ``t = 0`` (the glued connection). The
unknowns are the bubble center, scale and gluing angle; at each marked point the
instanton curvature must equal ``sigma_2(P_eff) M(P_eff)`` with
``P_eff = Mat(F_t) - Mat(F_std)``, ``M`` following the branch of the previous
step.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from scipy import optimize

from .algebra import asd_mat, singular_values, so3_exp, so3_log
from .exceptions import CertificateError, ContinuationError, DegenerateInputError, InvalidArgumentError
from .fields import (
    CutoffScales,
    GluedConnectionModel,
    GluingData,
    Zone,
    fstd_radial_gauge,
    interpolated_curvature_form,
    zone_classify,
)
from .intersect import GENERIC, CountReport, IntersectionSolution, count_model_intersections
from .reducible import decompose_rank1, nearest_branch, rank_tolerance

if TYPE_CHECKING:
    from typing import Any, Sequence

    from .intersect import ProblemConfig
    from .types import FloatArray

logger = logging.getLogger(__name__)

MIN_STEP = 1e-4
CORRECTOR_TOL = 1e-10
JACOBIAN_STEP = 1e-7
# y-distance, in units of L, below which two tracked paths count as crossed
CROSSING_FACTOR = 1e-6


@dataclass
class _PathState:
    u: FloatArray
    branches: tuple[FloatArray, FloatArray]


@dataclass(eq=False)
class TrackedPath:
    """One solution followed through the family, with its reference point at the model count."""

    cfg: ProblemConfig
    start: IntersectionSolution
    scales: CutoffScales

    def unpack(self, u: FloatArray) -> tuple[FloatArray, float, FloatArray]:
        y = self.start.y + self.cfg.L * u[:4]
        lam = self.start.lam * (1.0 + u[4])
        return y, lam, self.start.m @ so3_exp(u[5:])

    def gluing(self, u: FloatArray) -> GluingData:
        y, lam, m = self.unpack(u)
        return GluingData.from_rotation(y, lam, m)

    def model(self, u: FloatArray, t: float) -> GluedConnectionModel:
        return GluedConnectionModel(self.cfg.background, self.gluing(u), self.scales, t)

    def residual(self, u: FloatArray, t: float, branches: tuple[FloatArray, FloatArray]) -> FloatArray:
        residual, _ = self.evaluate(u, t, branches)
        return residual

    def evaluate(
        self, u: FloatArray, t: float, branches: tuple[FloatArray, FloatArray]
    ) -> tuple[FloatArray, tuple[FloatArray, FloatArray]]:
        """Residual at ``(u, t)`` and the branch rotations it was measured against."""
        if not (np.all(np.isfinite(u)) and u[4] > -1.0):
            return np.full(8, math.pi), branches
        model = self.model(u, t)
        out = []
        chosen = []
        for point, reference in zip((self.cfg.p, self.cfg.q), branches):
            F_std = fstd_radial_gauge(point, model.bubble)
            P_eff = asd_mat(interpolated_curvature_form(point, model)) - F_std
            try:
                branch = nearest_branch(decompose_rank1(P_eff), reference)
            except DegenerateInputError:
                return np.full(8, math.pi), branches
            r2 = float(np.sum((point - model.bubble.y) ** 2))
            h = model.bubble.lam**2 / (model.bubble.lam**2 + r2) ** 2
            out.append([(h - branch.s) / branch.s])
            out.append(so3_log(branch.M.T @ F_std / h))
            chosen.append(branch.M)
        return np.concatenate(out), (chosen[0], chosen[1])

    def correct(self, u0: FloatArray, t: float, branches: tuple[FloatArray, FloatArray]) -> _PathState | None:
        with np.errstate(all="ignore"):
            result = optimize.root(lambda u: self.residual(u, t, branches), u0, method="hybr", options={"xtol": 1e-13})
        residual, chosen = self.evaluate(result.x, t, branches)
        if not float(np.linalg.norm(residual)) < CORRECTOR_TOL:
            return None
        return _PathState(np.asarray(result.x, dtype=float), chosen)

    def jacobian_det(self, state: _PathState, t: float) -> float:
        J = np.empty((8, 8))
        for k in range(8):
            step = np.zeros(8)
            step[k] = JACOBIAN_STEP
            plus = self.residual(state.u + step, t, state.branches)
            minus = self.residual(state.u - step, t, state.branches)
            J[:, k] = (plus - minus) / (2.0 * JACOBIAN_STEP)
        return float(np.linalg.det(J))

    def zones(self, u: FloatArray) -> tuple[Zone, Zone]:
        y, _, _ = self.unpack(u)
        return zone_classify(self.cfg.p, y, self.scales), zone_classify(self.cfg.q, y, self.scales)


@dataclass(eq=False)
class ContinuationReport:
    t_values: list[float]
    slices: list[CountReport]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def counts(self) -> list[int]:
        return [report.total_signed_count for report in self.slices]

    def serialize(self) -> dict[str, Any]:
        return {
            "t": self.t_values,
            "counts": self.counts,
            "slices": [report.serialize() for report in self.slices],
            "diagnostics": self.diagnostics,
        }


def _check_grid(t_grid: Sequence[float]) -> list[float]:
    grid = [float(t) for t in t_grid]
    if len(grid) < 2 or grid[0] != 1.0 or grid[-1] != 0.0:
        raise InvalidArgumentError("t_grid must start at 1 and end at 0")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError("t_grid must be strictly decreasing")
    return grid


def _check_plateau(path: TrackedPath, state: _PathState, t: float, diagnostics: dict[str, Any]) -> None:
    zones = path.zones(state.u)
    if zones != (Zone.III_PLATEAU, Zone.III_PLATEAU):
        raise ContinuationError(
            f"solution for pair {path.start.pair} is off the plateau at t={t:.6g}",
            {**diagnostics, "t": t, "zones": [z.value for z in zones], "pair": list(path.start.pair)},
        )


def _march(path: TrackedPath, state: _PathState, t_from: float, t_to: float, diagnostics: dict[str, Any]) -> _PathState:
    """Secant predictor and corrector from ``t_from`` down to ``t_to`` with step halving."""
    t_cur, dt = t_from, t_from - t_to
    previous: tuple[float, FloatArray] | None = None
    while t_cur > t_to:
        t_next = max(t_cur - dt, t_to)
        if previous is None:
            guess = state.u
        else:
            t_prev, u_prev = previous
            guess = state.u + (state.u - u_prev) * (t_next - t_cur) / (t_cur - t_prev)
        accepted = path.correct(guess, t_next, state.branches)
        if accepted is None:
            dt /= 2.0
            logger.debug("continuation: corrector failed at t=%.6g, step halved to %.3e", t_next, dt)
            if dt < MIN_STEP:
                raise ContinuationError(
                    f"step size fell below {MIN_STEP} at t={t_cur:.6g}", {**diagnostics, "t": t_cur, "pair": list(path.start.pair)}
                )
            continue
        _check_plateau(path, accepted, t_next, diagnostics)
        previous = (t_cur, state.u)
        state, t_cur = accepted, t_next
        diagnostics["steps"] = diagnostics.get("steps", 0) + 1
    return state


def _slice_solution(path: TrackedPath, state: _PathState, t: float, sign: int) -> IntersectionSolution:
    gluing = path.gluing(state.u)
    residual, _ = path.evaluate(state.u, t, state.branches)
    model = GluedConnectionModel(path.cfg.background, gluing, path.scales, t)
    for point in (path.cfg.p, path.cfg.q):
        F_t = asd_mat(interpolated_curvature_form(point, model))
        if not float(singular_values(F_t)[1]) < rank_tolerance(F_t):
            raise CertificateError(f"tracked solution for pair {path.start.pair} is not reducible at t={t:.6g}")
    return IntersectionSolution(
        gluing,
        path.start.pair,
        float(np.linalg.norm(residual)),
        float(gluing.y[0]),
        gluing.y[1:].copy(),
        state.branches,
        path.start.magnitudes,
        sign,
    )


def _check_crossings(solutions: list[IntersectionSolution], L: float, t: float) -> None:
    for k, first in enumerate(solutions):
        for second in solutions[k + 1 :]:
            if float(np.linalg.norm(first.y - second.y)) < CROSSING_FACTOR * L and np.allclose(first.m, second.m, atol=1e-6):
                raise ContinuationError(
                    f"paths of pairs {first.pair} and {second.pair} crossed at t={t:.6g}",
                    {"t": t, "pairs": [list(first.pair), list(second.pair)]},
                )


def continuation_count(
    cfg: ProblemConfig,
    scales: CutoffScales | GluedConnectionModel | None = None,
    t_grid: Sequence[float] = tuple(np.linspace(1.0, 0.0, 5)),
    seed: int = 0,
) -> ContinuationReport:
    """Follow every model solution from ``t = 1`` to ``t = 0`` and count at each grid value.

    :param cfg: Problem configuration with a generic background.
    :param scales: Cutoff scales, or a glued model whose scales are used; by default
        :meth:`CutoffScales.for_bubble` at each solution's scale.
    :param t_grid: Decreasing grid from 1 to 0.
    :param seed: Seed of the model count.
    :return: One count report per grid value.
    :raises ContinuationError: If a path fails to converge or crosses another path, or a state lies off the plateau.
    """
    grid = _check_grid(t_grid)
    if isinstance(scales, GluedConnectionModel):
        scales = scales.scales
    base = count_model_intersections(cfg, seed)
    paths = []
    states = []
    reference_dets = []
    for sol in base.solutions:
        path = TrackedPath(cfg, sol, scales or CutoffScales.for_bubble(cfg.background, sol.lam))
        state = path.correct(np.zeros(8), 1.0, sol.targets)
        if state is None:
            raise ContinuationError(f"no solution near pair {sol.pair} at t=1", {"t": 1.0, "pair": list(sol.pair)})
        _check_plateau(path, state, 1.0, {})
        paths.append(path)
        states.append(state)
        reference_dets.append(path.jacobian_det(state, 1.0))
    diagnostics: dict[str, Any] = {"steps": 0}
    slices = []
    for k, t in enumerate(grid):
        if k > 0:
            states = [_march(path, state, grid[k - 1], t, diagnostics) for path, state in zip(paths, states)]
        solutions = []
        for path, state, det_ref in zip(paths, states, reference_dets):
            relative = 1 if np.sign(path.jacobian_det(state, t)) == np.sign(det_ref) else -1
            solutions.append(_slice_solution(path, state, t, path.start.sign * relative))
        _check_crossings(solutions, cfg.L, t)
        report = CountReport(solutions, GENERIC, {**cfg.serialize(), "t": t})
        report.diagnostics["zones"] = [[z.value for z in path.zones(state.u)] for path, state in zip(paths, states)]
        slices.append(report)
        logger.debug("continuation: t=%.4g count %d", t, report.total_signed_count)
    if any(report.total_signed_count != base.total_signed_count for report in slices):
        raise CertificateError(f"signed count changed along the family: {[r.total_signed_count for r in slices]}")
    return ContinuationReport(grid, slices, diagnostics)
