"""Rank-one reduction of curvature matrices.

Given a 3x3 matrix ``P`` we look for ``s > 0`` and ``M`` in SO(3) such that
``P + s M`` has rank at most one. For a generic spectrum there are exactly two
such pairs, both with ``s = sigma_2(P)``. In the signed canonical frame of ``P``
they are ``M = U M_theta V^T`` where ``M_theta`` is the rotation by pi about the
axis ``(sin theta/2, 0, cos theta/2)``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .algebra import signed_svd, singular_values
from .exceptions import AlreadyReducibleError, DegenerateInputError, InfiniteSolutionsError, InvalidArgumentError
from .types import DEFAULT_GAP_TOL_FACTOR, RANK_TOL_FACTOR

if TYPE_CHECKING:
    from .types import FloatArray

logger = logging.getLogger(__name__)

# |delta M|_F <= SENSITIVITY_CONSTANT * |delta P|_F / gap, calibrated on random generic spectra.
SENSITIVITY_CONSTANT = 20.0


class SpectrumKind(str, enum.Enum):
    GENERIC = "generic"
    SIGMA12_EQUAL = "sigma12_equal"
    SIGMA23_EQUAL = "sigma23_equal"
    RANK_LE_1 = "rank_le_1"
    MULTIPLE_OF_SO3 = "multiple_of_SO3"
    ZERO = "zero"


class Branch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    DOUBLE_ROOT = "double_root"


@dataclass(frozen=True)
class SpectrumClass:
    """Degeneracy class of a spectrum.

    ``gap`` is the smallest singular-value gap for a generic spectrum and the
    residual of the defining equality otherwise.
    """

    kind: SpectrumKind
    gap: float
    singular_values: tuple[float, float, float]

    @property
    def is_generic(self) -> bool:
        return self.kind is SpectrumKind.GENERIC


@dataclass(frozen=True, eq=False)
class ReducibleDecomposition:
    s: float
    M: FloatArray
    theta: float
    branch: Branch

    def rank_residual(self, P: FloatArray) -> tuple[float, float]:
        """``(sigma_2, sigma_3)`` of ``P + s M``."""
        sv = singular_values(np.asarray(P) + self.s * self.M)
        return float(sv[1]), float(sv[2])

    def certifies(self, P: FloatArray) -> bool:
        s2, s3 = self.rank_residual(P)
        tol = rank_tolerance(P)
        return s2 < tol and s3 < tol


def rank_tolerance(P: FloatArray) -> float:
    return RANK_TOL_FACTOR * (1.0 + float(singular_values(P)[0]))


def default_gap_tol(P: FloatArray) -> float:
    return DEFAULT_GAP_TOL_FACTOR * (1.0 + float(singular_values(P)[0]))


def rotation_frame(theta: float) -> FloatArray:
    """Canonical-frame rotation by pi about ``(sin theta/2, 0, cos theta/2)``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[-c, 0.0, s], [0.0, -1.0, 0.0], [s, 0.0, c]])


def classify_spectrum(P: FloatArray, gap_tol: float) -> SpectrumClass:
    """Return the most degenerate class whose defining equalities hold within ``gap_tol``.

    :param P: 3x3 matrix.
    :param gap_tol: Positive tolerance on singular-value equalities.
    :return: The spectrum class.
    """
    if gap_tol <= 0:
        raise InvalidArgumentError("gap_tol must be positive")
    s1, s2, s3 = (float(v) for v in singular_values(P))
    sv = (s1, s2, s3)
    if s1 <= gap_tol:
        return SpectrumClass(SpectrumKind.ZERO, s1, sv)
    if s1 - s3 <= gap_tol:
        return SpectrumClass(SpectrumKind.MULTIPLE_OF_SO3, s1 - s3, sv)
    if s2 <= gap_tol:
        return SpectrumClass(SpectrumKind.RANK_LE_1, s2, sv)
    if s1 - s2 <= gap_tol:
        return SpectrumClass(SpectrumKind.SIGMA12_EQUAL, s1 - s2, sv)
    if s2 - s3 <= gap_tol:
        return SpectrumClass(SpectrumKind.SIGMA23_EQUAL, s2 - s3, sv)
    return SpectrumClass(SpectrumKind.GENERIC, min(s1 - s2, s2 - s3), sv)


def _theta_argument(d: FloatArray) -> float:
    d1, d2, d3 = (float(v) for v in d)
    arg = (d2 * d2 - d1 * d3) / ((d1 - d3) * d2)
    # grazing double roots can overshoot [-1, 1] by roundoff
    return min(1.0, max(-1.0, arg))


def decompose_rank1(P: FloatArray, gap_tol: float | None = None) -> list[ReducibleDecomposition]:
    """Both ways of writing ``P`` as ``-s M`` plus a rank-one matrix.

    :param P: 3x3 matrix with generic spectrum.
    :param gap_tol: Tolerance for the genericity check, defaults to ``1e-9 (1 + sigma_1)``.
    :return: Two decompositions, ``plus`` first.
    :raises DegenerateInputError: If the spectrum is not generic.
    """
    P = np.asarray(P, dtype=float)
    spectrum = classify_spectrum(P, default_gap_tol(P) if gap_tol is None else gap_tol)
    if not spectrum.is_generic:
        raise DegenerateInputError("decompose_rank1 needs a generic spectrum", spectrum)
    U, d, V = signed_svd(P)
    theta = math.acos(_theta_argument(d))
    s = float(d[1])
    result = [
        ReducibleDecomposition(s, U @ rotation_frame(theta) @ V.T, theta, Branch.PLUS),
        ReducibleDecomposition(s, U @ rotation_frame(-theta) @ V.T, -theta, Branch.MINUS),
    ]
    logger.debug("decompose_rank1: d=%r theta=%.6g", d, theta)
    return result


def decompose_rank1_degenerate(P: FloatArray, gap_tol: float | None = None) -> ReducibleDecomposition:
    """Double-root decomposition for spectra with ``sigma_1 = sigma_2`` or ``sigma_2 = sigma_3``.

    :raises InfiniteSolutionsError: For positive multiples of SO(3).
    :raises AlreadyReducibleError: For rank at most one.
    :raises InvalidArgumentError: For generic spectra.
    """
    P = np.asarray(P, dtype=float)
    spectrum = classify_spectrum(P, default_gap_tol(P) if gap_tol is None else gap_tol)
    if spectrum.kind is SpectrumKind.MULTIPLE_OF_SO3:
        raise InfiniteSolutionsError("determinant function vanishes identically", spectrum)
    if spectrum.kind in (SpectrumKind.RANK_LE_1, SpectrumKind.ZERO):
        raise AlreadyReducibleError("matrix already has rank at most one", spectrum)
    if spectrum.is_generic:
        raise InvalidArgumentError("generic spectrum has two distinct roots, use decompose_rank1")
    U, d, V = signed_svd(P)
    theta = 0.0 if _theta_argument(d) >= 0 else math.pi
    return ReducibleDecomposition(float(d[1]), U @ rotation_frame(theta) @ V.T, theta, Branch.DOUBLE_ROOT)


def sensitivity_bound(P: FloatArray, dP: FloatArray) -> float:
    """Upper bound for the change of ``M`` under ``P -> P + dP``.

    Valid for ``|dP| <= gap / 10``; all norms are Frobenius norms.
    """
    P = np.asarray(P, dtype=float)
    spectrum = classify_spectrum(P, default_gap_tol(P))
    if not spectrum.is_generic:
        raise DegenerateInputError("sensitivity bound needs a generic spectrum", spectrum)
    return SENSITIVITY_CONSTANT * float(np.linalg.norm(dP)) / spectrum.gap


def nearest_branch(decompositions: list[ReducibleDecomposition], M: FloatArray) -> ReducibleDecomposition:
    """Decomposition whose rotation is closest to ``M``."""
    return min(decompositions, key=lambda dec: float(np.linalg.norm(dec.M - M)))
