"""JSON and CSV encoding of experiment results."""

from __future__ import annotations

import csv
import enum
import json
import logging
import math
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from packaging.version import InvalidVersion, Version

from .exceptions import SchemaVersionError
from .fields import BackgroundModel
from .types import SCHEMA_VERSION

if TYPE_CHECKING:
    from typing import Any, Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert numpy arrays and scalars, enums, fractions and non-finite floats to plain JSON values."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def dumps(document: Mapping[str, Any]) -> str:
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2) + "\n"


def check_schema_version(document: Mapping[str, Any]) -> Version:
    """Accept documents whose major schema version matches ours.

    :raises SchemaVersionError: If the version is missing, malformed or of another major release.
    """
    raw = document.get("schema_version")
    if raw is None:
        raise SchemaVersionError("document has no schema_version")
    try:
        version = Version(str(raw))
    except InvalidVersion:
        raise SchemaVersionError(f"malformed schema_version {raw!r}") from None
    if version.major != Version(SCHEMA_VERSION).major:
        raise SchemaVersionError(f"schema_version {version} is not compatible with {SCHEMA_VERSION}")
    return version


def background_to_dict(background: BackgroundModel) -> dict[str, Any]:
    return {
        "P0": background.P0.tolist(),
        "P1": background.P1.tolist(),
        "patch_radius": background.patch_radius,
    }


def background_from_dict(data: Mapping[str, Any]) -> BackgroundModel:
    return BackgroundModel(
        np.asarray(data["P0"], dtype=float),
        np.asarray(data["P1"], dtype=float),
        float(data.get("patch_radius", 1.0)),
    )


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a CSV table with a header row."""
    with open(path, "w", newline="") as fd:
        writer = csv.writer(fd)
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([to_jsonable(item) for item in row])
            count += 1
    logger.debug("wrote %d rows to %s", count, path)
