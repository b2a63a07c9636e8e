"""Holonomy model, sensitivity and displacements."""

import numpy as np
import pytest

from asd_boundary.exceptions import InvalidArgumentError
from asd_boundary.intersect import (
    HolonomyModel,
    ProblemConfig,
    count_model_intersections,
    count_with_holonomy_model,
    holonomy_displacement_constant,
    sample_generic_background,
    sensitivity_scan,
    solution_displacements,
)


def test_zero_strength_returns_the_model_count(generic_config):
    report = count_with_holonomy_model(generic_config, 0.0, seed=1)
    base = count_model_intersections(generic_config, seed=1)
    assert report.serialize()["solutions"] == base.serialize()["solutions"]
    assert report.diagnostics["displacement_constant"] == 0.0
    assert report.diagnostics["displacement_ratios"] == [0.0] * 6


@pytest.mark.parametrize("strength", [0.01, 0.1])
def test_holonomy_count(generic_config, strength):
    report = count_with_holonomy_model(generic_config, strength, seed=1)
    assert report.total_signed_count == 6
    assert np.isfinite(report.diagnostics["displacement_constant"])
    base = count_model_intersections(generic_config, seed=1)
    constant = report.diagnostics["displacement_constant"]
    for moved, sol in zip(report.solutions, base.solutions):
        assert np.linalg.norm(moved.y - sol.y) <= constant * generic_config.L * np.linalg.norm(sol.yI) + 1e-15


@pytest.mark.parametrize("L", [1e-2, 3e-3, 1e-3])
def test_holonomy_displacement_stays_below_the_a_priori_constant(generic_background, L):
    cfg = ProblemConfig(L, generic_background)
    base = count_model_intersections(cfg, seed=1)
    constant = holonomy_displacement_constant(cfg, base.solutions, 0.1)
    report = count_with_holonomy_model(cfg, 0.1, seed=1)
    assert report.total_signed_count == 6
    assert report.diagnostics["displacement_constant"] == pytest.approx(constant)
    for moved, sol in zip(report.solutions, base.solutions):
        assert 0 < np.linalg.norm(moved.y - sol.y) <= constant * L * np.linalg.norm(sol.yI)


def test_holonomy_displacement_is_linear_in_strength(generic_config):
    small = count_with_holonomy_model(generic_config, 0.01, seed=1).diagnostics
    large = count_with_holonomy_model(generic_config, 0.04, seed=1).diagnostics
    assert large["displacement_constant"] == pytest.approx(4 * small["displacement_constant"])
    np.testing.assert_allclose(np.array(large["displacement_ratios"]) / np.array(small["displacement_ratios"]), 4.0, rtol=0.05)


def test_holonomy_model_strength(rng):
    model = HolonomyModel.random(0.3, rng)
    assert np.linalg.norm(model.c_p, 2) == pytest.approx(0.3)
    H_p, H_q = model.gauges(np.array([0.0, 1.0, 0.0, 0.0]), 1e-2)
    np.testing.assert_allclose(H_p @ H_p.T, np.eye(3), atol=1e-14)
    with pytest.raises(InvalidArgumentError):
        HolonomyModel.random(-1.0, rng)


def test_displacements_vanish_without_perturbation(generic_config):
    sol = count_model_intersections(generic_config).solutions[0]
    assert solution_displacements(generic_config, sol, 0.0, np.array([1.0, 0.0, 0.0])) == {
        "m": 0.0,
        "y": 0.0,
        "lambda": 0.0,
    }


def test_displacements_are_linear_in_eps(generic_config):
    sol = next(s for s in count_model_intersections(generic_config).solutions if s.pair == (0, 1))
    axis = np.array([0.0, 0.6, 0.8])
    small = solution_displacements(generic_config, sol, 1e-4, axis)
    large = solution_displacements(generic_config, sol, 1e-3, axis)
    assert large["y"] / small["y"] == pytest.approx(10.0, rel=0.05)


@pytest.mark.slow
def test_sensitivity_exponents():
    cfg = ProblemConfig(1e-2, sample_generic_background(np.random.default_rng(5)))
    scan = sensitivity_scan(cfg, seed=5)
    expected = {"m": (1.0, 0.0), "y": (1.0, 1.0), "lambda": (1.0, 2.0)}
    for name, (eps_exponent, L_exponent) in expected.items():
        fitted = scan.exponents[name]
        assert fitted[0] == pytest.approx(eps_exponent, abs=0.2)
        assert fitted[1] == pytest.approx(L_exponent, abs=0.2)
