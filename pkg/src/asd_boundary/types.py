"""Common numerical constants and array aliases."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from typing_extensions import TypeAlias

FloatArray: TypeAlias = "npt.NDArray[np.float64]"

UNIT_NORM_TOL = 1e-9
ROTATION_TOL = 1e-10
RANK_TOL_FACTOR = 1e-8
DEFAULT_GAP_TOL_FACTOR = 1e-9

# Scale-separation thresholds for R1^2 < INNER * lam * R3 and R2^2 > OUTER * lam / sqrt(s0).
INNER_SEPARATION = 1e-6
OUTER_SEPARATION = 1e6
DEFAULT_R1_FACTOR = 1e-4
DEFAULT_R2_FACTOR = 1e4

MAX_JACOBIAN_CONDITION = 1e12
SIMPLE_TYPE_COUNT = 64
SIMPLE_TYPE_FIBER_VALUE = 4

SCHEMA_VERSION = "1.0"
