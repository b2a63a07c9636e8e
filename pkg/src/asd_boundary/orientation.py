"""Local intersection signs.

A solution is a zero of the map ``Psi(y, lam, xi)`` whose eight components are
the magnitude deviation and the three direction-mismatch coordinates at ``p``
followed by the same at ``q``; the gluing angle is ``m exp(xi)``. The sign is
that of ``det dPsi`` relative to the canonical configuration ``s_p = s_q = 1``,
``M_p = M_q = 1``, ``y = 0``, ``m = 1``.
"""

from __future__ import annotations

import functools
import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from .algebra import Quaternion, rho, so3_exp, so3_log
from .exceptions import IndeterminateSignError
from .types import MAX_JACOBIAN_CONDITION

if TYPE_CHECKING:
    from typing import Any

    from .types import FloatArray

logger = logging.getLogger(__name__)

FD_STEP = 1e-6


def residual_map(
    v: FloatArray,
    m: FloatArray,
    points: tuple[FloatArray, FloatArray],
    targets: tuple[FloatArray, FloatArray],
    magnitudes: tuple[float, float],
    chart_orientation: int = 1,
) -> FloatArray:
    """``Psi`` at ``v = (y0, y1, y2, y3, lam, xi1, xi2, xi3)``."""
    y, lam = v[:4], v[4]
    flip = np.diag([float(chart_orientation), 1.0, 1.0])
    rotated = m @ so3_exp(flip @ v[5:])
    out = []
    for point, target, s in zip(points, targets, magnitudes):
        u = point - y
        r2 = float(np.sum(u**2))
        out.append([lam**2 / (lam**2 + r2) ** 2 - s])
        out.append(so3_log(target.T @ rotated.T @ rho(Quaternion.from_array(u / math.sqrt(r2)))))
    return np.concatenate(out)


def residual_jacobian(
    y: FloatArray,
    lam: float,
    m: FloatArray,
    points: tuple[FloatArray, FloatArray],
    targets: tuple[FloatArray, FloatArray],
    magnitudes: tuple[float, float],
    L: float,
    chart_orientation: int = 1,
) -> tuple[FloatArray, FloatArray]:
    """Central-difference Jacobian of :func:`residual_map` and the column scales used for conditioning."""
    base = np.concatenate((y, [lam], np.zeros(3)))
    scales = np.array([L, L, L, L, lam, 1.0, 1.0, 1.0])
    J = np.empty((8, 8))
    for k in range(8):
        h = FD_STEP * scales[k]
        step = np.zeros(8)
        step[k] = h
        plus = residual_map(base + step, m, points, targets, magnitudes, chart_orientation)
        minus = residual_map(base - step, m, points, targets, magnitudes, chart_orientation)
        J[:, k] = (plus - minus) / (2.0 * h)
    return J, scales


def jacobian_sign(J: FloatArray, scales: FloatArray) -> int:
    """Sign of ``det J``.

    :raises IndeterminateSignError: If the column-scaled condition number exceeds the limit.
    """
    condition = float(np.linalg.cond(J * scales[None, :]))
    if not condition <= MAX_JACOBIAN_CONDITION:
        raise IndeterminateSignError(f"Jacobian condition number {condition:.3e} exceeds {MAX_JACOBIAN_CONDITION:.0e}")
    return 1 if np.linalg.det(J) > 0 else -1


@functools.lru_cache(maxsize=64)
def canonical_sign(L: float, chart_orientation: int = 1) -> int:
    """Raw determinant sign of the canonical configuration at half-separation ``L``."""
    lam = 2.0 * L**2 / (1.0 + math.sqrt(1.0 - 4.0 * L**2))
    identity = np.eye(3)
    points = (np.array([-L, 0.0, 0.0, 0.0]), np.array([L, 0.0, 0.0, 0.0]))
    J, scales = residual_jacobian(np.zeros(4), lam, identity, points, (identity, identity), (1.0, 1.0), L, chart_orientation)
    return jacobian_sign(J, scales)


def solution_sign(sol: Any, cfg: Any, chart_orientation: int = 1) -> int:
    """Local intersection number of a solution, calibrated to +1 on the canonical configuration.

    :param sol: Solution carrying ``y``, ``lam``, ``m``, ``targets`` and ``magnitudes``.
    :param cfg: Problem configuration carrying ``L``, ``p`` and ``q``.
    :param chart_orientation: ``-1`` reverses the orientation of the gluing-angle chart.
    :return: ``+1`` or ``-1``.
    """
    J, scales = residual_jacobian(
        sol.y, sol.lam, sol.m, (cfg.p, cfg.q), sol.targets, sol.magnitudes, cfg.L, chart_orientation
    )
    sign = jacobian_sign(J, scales) * canonical_sign(float(cfg.L))
    logger.debug("solution_sign: pair %s sign %+d", getattr(sol, "pair", None), sign)
    return sign
