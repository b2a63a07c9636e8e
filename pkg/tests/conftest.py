import numpy as np
import pytest

from asd_boundary.intersect import ProblemConfig, sample_generic_background


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def generic_background():
    return sample_generic_background(np.random.default_rng(7))


@pytest.fixture
def generic_config(generic_background):
    return ProblemConfig(1e-2, generic_background)


@pytest.fixture
def output_path(tmp_path):
    return str(tmp_path / "result.json")
