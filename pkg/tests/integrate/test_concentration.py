"""Scale concentration and the order of limits."""

import numpy as np
import pytest

from asd_boundary.exceptions import InvalidArgumentError
from asd_boundary.integrate import (
    FiberRegion,
    concentration_contrast,
    concentration_profile,
    limit_order_study,
    truncated_fiber_integral,
)


def test_profile_median_scales_with_separation():
    profiles = [concentration_profile(L) for L in (1e-2, 1e-3)]
    for profile in profiles:
        assert profile.edges[0] < profile.median_lambda < profile.edges[-1]
        assert np.all(profile.mass >= 0.0)
    ratio = profiles[0].median_lambda / profiles[1].median_lambda
    assert ratio == pytest.approx(10.0, rel=0.15)


@pytest.mark.parametrize("L", [1e-2, 1e-3])
def test_profile_mass_adds_up_to_the_truncated_integral(L):
    profile = concentration_profile(L, n_bins=12)
    whole = truncated_fiber_integral(truncation=FiberRegion(1e-3, 1.0 / L, 1.0 / L, 0.0))
    assert profile.total == pytest.approx(whole.value, rel=1e-5)


def test_profile_needs_positive_separation():
    with pytest.raises(InvalidArgumentError):
        concentration_profile(0.0)


def test_fixed_separation_limit_vanishes():
    study = limit_order_study(coupling="fixed")
    values = study.values
    assert values[0] > values[1] > values[2]
    assert values[-1] < 1e-3


def test_coupled_limit_recovers_the_integral():
    study = limit_order_study(coupling="coupled", alpha_prime=0.5)
    values = study.values
    assert values[0] < values[1] < values[2]
    assert values[-1] > 0.9
    assert study.rows[-1]["L"] == pytest.approx(1e-3**1.5)


def test_unknown_coupling():
    with pytest.raises(InvalidArgumentError):
        limit_order_study(coupling="diagonal")


@pytest.mark.slow
def test_concentration_contrast():
    contrast = concentration_contrast(seed=2)
    assert contrast.solution_exponent == pytest.approx(2.0, abs=0.15)
    assert contrast.integrand_exponent == pytest.approx(1.0, abs=0.15)
