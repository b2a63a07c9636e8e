"""Continuation through the interpolated family."""

import numpy as np
import pytest

from asd_boundary.continuation import continuation_count
from asd_boundary.exceptions import ContinuationError, InvalidArgumentError
from asd_boundary.fields import CutoffScales, Zone
from asd_boundary.intersect import ProblemConfig, sample_generic_background


@pytest.mark.parametrize("t_grid", [(0.5, 0.0), (1.0, 0.5), (1.0, 0.6, 0.7, 0.0), (1.0,)])
def test_grid_validation(generic_config, t_grid):
    with pytest.raises(InvalidArgumentError):
        continuation_count(generic_config, t_grid=t_grid)


def test_count_is_constant_along_the_family(generic_config):
    report = continuation_count(generic_config, t_grid=(1.0, 0.5, 0.0), seed=4)
    assert report.t_values == [1.0, 0.5, 0.0]
    assert report.counts == [6, 6, 6]
    plateau = [Zone.III_PLATEAU.value, Zone.III_PLATEAU.value]
    for sliced in report.slices:
        assert all(zones == plateau for zones in sliced.diagnostics["zones"])


@pytest.mark.slow
def test_continuation_over_backgrounds():
    rng = np.random.default_rng(99)
    for _ in range(5):
        cfg = ProblemConfig(1e-2, sample_generic_background(rng))
        report = continuation_count(cfg)
        assert report.counts == [6] * 5


def test_start_on_the_inner_shoulder_is_rejected(generic_config):
    # the matched solutions sit at distance L from both marked points
    scales = CutoffScales(R1=generic_config.L, R2=1.0, R3=1.0, s0=1.0)
    with pytest.raises(ContinuationError, match="off the plateau at t=1") as excinfo:
        continuation_count(generic_config, scales, t_grid=(1.0, 0.0), seed=4)
    assert excinfo.value.diagnostics["t"] == 1.0
    assert excinfo.value.diagnostics["pair"] == [0, 0]
    assert excinfo.value.diagnostics["zones"] == [Zone.II_INNER_SHOULDER.value] * 2
