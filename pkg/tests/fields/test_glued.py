"""Glued connections, their curvature and the interpolated family."""

import numpy as np
import pytest

from asd_boundary.algebra import random_rotation, two_form_from_mat, two_form_norm_sq
from asd_boundary.exceptions import InvalidArgumentError, SingularGaugeError
from asd_boundary.fields import (
    BackgroundModel,
    CutoffScales,
    GluedConnectionModel,
    GluingData,
    Zone,
    fiber_curvature_norm_sq,
    finite_difference_curvature,
    fstd_radial_gauge,
    fstd_regular_gauge,
    glued_curvature,
    interpolated_curvature,
    interpolated_curvature_form,
)


@pytest.fixture
def model(rng, generic_background):
    background = BackgroundModel(generic_background.P0, 0.2 * rng.standard_normal((3, 3, 4))).bianchi_projected()
    bubble = GluingData.from_rotation(np.zeros(4), 0.1, random_rotation(rng))
    scales = CutoffScales(0.05, 0.4, background.R3, background.s0)
    return GluedConnectionModel(background, bubble, scales)


@pytest.mark.parametrize(
    ["distance", "zone"],
    [
        (0.06, Zone.II_INNER_SHOULDER),
        (0.08, Zone.II_INNER_SHOULDER),
        (0.15, Zone.III_PLATEAU),
        (0.3, Zone.IV_OUTER_SHOULDER),
        (0.45, Zone.IV_OUTER_SHOULDER),
    ],
)
def test_glued_curvature_matches_finite_differences(model, distance, zone):
    x = distance * np.array([0.5, 0.5, -0.5, 0.5])
    assert model.zone(x) is zone
    expected = finite_difference_curvature(model.connection_form, x, 1e-6)
    F = glued_curvature(x, model).form
    assert np.abs(F - expected).max() <= 1e-5 * max(1.0, np.abs(F).max())


def test_exterior_and_interior_zones(model):
    inside = np.array([0.01, 0.0, 0.0, 0.0])
    outside = np.array([0.0, 0.0, 0.9, 0.0])
    assert model.zone(inside) is Zone.I_INTERIOR
    assert model.zone(outside) is Zone.V_EXTERIOR
    np.testing.assert_allclose(glued_curvature(inside, model).mat, fstd_radial_gauge(inside, model.bubble))
    np.testing.assert_allclose(glued_curvature(outside, model).form, model.background_curvature(outside))
    with pytest.raises(SingularGaugeError):
        glued_curvature(model.bubble.y, model)


def test_interpolated_family_endpoints(model):
    x = np.array([0.0, 0.1, 0.05, 0.0])
    separate = model.background_curvature(x) + model.instanton_curvature(x)
    np.testing.assert_array_equal(interpolated_curvature_form(x, model, 1.0), separate)
    np.testing.assert_array_equal(interpolated_curvature_form(x, model, 0.0), glued_curvature(x, model).form)
    halfway = interpolated_curvature(x, model.with_t(0.5))
    np.testing.assert_allclose(
        halfway, 0.5 * (interpolated_curvature(x, model, 1.0) + interpolated_curvature(x, model, 0.0)), atol=1e-12
    )
    with pytest.raises(InvalidArgumentError):
        interpolated_curvature_form(x, model, 1.5)
    with pytest.raises(InvalidArgumentError):
        model.with_t(-0.1)


def test_gluing_data_validation():
    with pytest.raises(InvalidArgumentError):
        GluingData.from_rotation(np.zeros(4), 0.0, np.eye(3))
    with pytest.raises(InvalidArgumentError):
        GluingData.from_rotation(np.zeros(4), 1.0, 2.0 * np.eye(3))


def test_fiber_curvature_norm(rng):
    a = rng.standard_normal(4)
    b = rng.standard_normal(4)
    x = rng.standard_normal(4)
    lam = np.linalg.norm(a)
    expected = two_form_norm_sq(two_form_from_mat(fstd_regular_gauge(x - b, lam)))
    assert fiber_curvature_norm_sq(x, a, b) == pytest.approx(expected)
    assert fiber_curvature_norm_sq(b, [1.0, 0.0, 0.0, 0.0], b) == pytest.approx(48.0)
    with pytest.raises(InvalidArgumentError):
        fiber_curvature_norm_sq(x, np.zeros(4), b)


@pytest.mark.parametrize("distance", [0.06, 0.085, 0.15, 0.3, 0.5])
def test_glued_finite_differences_converge_at_second_order(model, distance):
    x = distance * np.array([0.5, 0.5, -0.5, 0.5])
    assert model.zone(x) not in (Zone.I_INTERIOR, Zone.V_EXTERIOR)
    F = glued_curvature(x, model).form
    coarse, fine = (float(np.abs(finite_difference_curvature(model.connection_form, x, h) - F).max()) for h in (1e-3, 1e-4))
    assert np.log10(coarse / fine) >= 1.9


@pytest.fixture
def separated(rng, generic_background):
    """Small bubble at the origin with the default cutoff scales."""
    background = BackgroundModel(generic_background.P0, 0.2 * rng.standard_normal((3, 3, 4))).bianchi_projected()
    lam = 1e-3
    bubble = GluingData.from_rotation(np.zeros(4), lam, random_rotation(rng))
    return GluedConnectionModel(background, bubble, CutoffScales.for_bubble(background, lam))


def random_directions(rng, n):
    v = rng.standard_normal((n, 4))
    return v / np.linalg.norm(v, axis=1)[:, None]


def test_inner_shoulder_stays_close_to_the_instanton(separated, rng):
    scales = separated.scales
    bound = 100.0 / scales.R3**2
    radii = np.geomspace(0.51 * scales.R1, 1.99 * scales.R1, 40)
    for r, direction in zip(radii, random_directions(rng, len(radii))):
        x = r * direction
        assert separated.zone(x) is Zone.II_INNER_SHOULDER
        for t in (0.0, 0.5, 1.0):
            rest = interpolated_curvature_form(x, separated, t) - separated.instanton_curvature(x)
            assert np.sqrt(two_form_norm_sq(rest)) <= bound


def test_plateau_cross_terms_decay_with_the_bubble(separated, rng):
    scales = separated.scales
    lam = separated.bubble.lam
    P0 = float(np.linalg.norm(separated.background.P0))
    P1 = float(np.linalg.norm(separated.background.P1))
    r_max = 0.9
    constant = 6.0 + 4.0 * r_max / scales.R3
    radii = np.geomspace(2.01 * scales.R1, r_max, 60)
    for r, direction in zip(radii, random_directions(rng, len(radii))):
        x = r * direction
        assert separated.zone(x) is Zone.III_PLATEAU
        cross = glued_curvature(x, separated).form - separated.background_curvature(x) - separated.instanton_curvature(x)
        norm = np.sqrt(two_form_norm_sq(cross))
        # |[A0, As] + [As, A0]| <= 4 |A0| |As| with |A0| <= 2 r |P0| + 4/3 r^2 |P1|
        decay = 4.0 * np.sqrt(3.0) * (2.0 * P0 + 4.0 / 3.0 * r * P1) * lam**2 / (lam**2 + r**2)
        assert norm <= decay * (1.0 + 1e-9) + 1e-9
        assert norm <= constant * lam**2 / (scales.R1**2 * scales.R3**2)
