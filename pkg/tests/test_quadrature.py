from __future__ import annotations

import math

import numpy as np
import pytest

from lishwi.errors import NumericalFailure
from lishwi.physics.quadrature import (
    DEFAULT_QUADRATURE,
    QuadratureSettings,
    integrate_or_raise,
    integrate_rect,
)


def test_constant_integrates_to_area():
    res = integrate_rect(lambda x, y: 1.0, -1.0, 2.0, 0.0, 0.5)
    assert res.converged
    assert res.value == pytest.approx(1.5, rel=1e-12)
    assert res.evaluations > 0


def test_polynomial_is_exact():
    value = integrate_or_raise(lambda x, y: x * y * y, 0.0, 1.0, 0.0, 1.0)
    assert value == pytest.approx(1.0 / 6.0, rel=1e-12)


def test_smooth_integrand_meets_tolerance():
    res = integrate_rect(lambda x, y: np.exp(-(x * x + y * y)), -3.0, 3.0, -3.0, 3.0)
    expected = math.pi * math.erf(3.0) ** 2
    assert res.converged
    assert abs(res.value - expected) <= DEFAULT_QUADRATURE.tolerance_for(expected)
    assert res.error_estimate <= DEFAULT_QUADRATURE.tolerance_for(res.value)


def test_results_are_deterministic():
    f = lambda x, y: np.cos(3.0 * x) * np.sin(2.0 * y) ** 2  # noqa: E731
    first = integrate_rect(f, 0.0, 1.0, 0.0, 2.0)
    second = integrate_rect(f, 0.0, 1.0, 0.0, 2.0)
    assert first == second


def test_exhausted_budget_is_reported():
    settings = QuadratureSettings(abs_tol=1e-15, rel_tol=1e-15, max_depth=1)
    f = lambda x, y: (x * x + y * y) ** -0.25  # noqa: E731
    res = integrate_rect(f, 0.0, 1.0, 0.0, 1.0, settings)
    assert not res.converged
    with pytest.raises(NumericalFailure) as excinfo:
        integrate_or_raise(f, 0.0, 1.0, 0.0, 1.0, settings, what="corner singularity")
    assert "corner singularity" in str(excinfo.value)
    assert excinfo.value.error_estimate > 0


def test_empty_rectangle_rejected():
    with pytest.raises(ValueError):
        integrate_rect(lambda x, y: 1.0, 1.0, 1.0, 0.0, 1.0)


@pytest.mark.parametrize("kwargs", [
    {"abs_tol": -1.0},
    {"abs_tol": 0.0, "rel_tol": 0.0},
    {"max_depth": 0},
])
def test_settings_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSettings(**kwargs)


def test_subdivision_budget():
    assert QuadratureSettings(max_depth=3).max_subdivisions == 64
    assert QuadratureSettings(max_depth=20).max_subdivisions == 10_000
    assert DEFAULT_QUADRATURE.tolerance_for(1.0) == pytest.approx(1e-8)
    assert DEFAULT_QUADRATURE.tolerance_for(0.0) == pytest.approx(1e-10)


def test_radial_square_on_unit_square():
    assert integrate_or_raise(lambda x, y: x * x + y * y, 0.0, 1.0, 0.0, 1.0) == \
        pytest.approx(2.0 / 3.0, rel=1e-12)


def test_linearity():
    f = lambda x, y: np.exp(-x * y)  # noqa: E731
    g = lambda x, y: np.cos(x + 2.0 * y)  # noqa: E731
    combined = integrate_or_raise(lambda x, y: 3.0 * f(x, y) - 0.5 * g(x, y), 0.0, 1.5, -1.0, 1.0)
    parts = 3.0 * integrate_or_raise(f, 0.0, 1.5, -1.0, 1.0) \
        - 0.5 * integrate_or_raise(g, 0.0, 1.5, -1.0, 1.0)
    assert combined == pytest.approx(parts, rel=1e-7)


def test_halves_add_up_to_the_whole():
    f = lambda x, y: (1.0 + x * x + y * y) ** -1.5  # noqa: E731
    whole = integrate_or_raise(f, -1.0, 1.0, 0.0, 2.0)
    left = integrate_or_raise(f, -1.0, 0.3, 0.0, 2.0)
    right = integrate_or_raise(f, 0.3, 1.0, 0.0, 2.0)
    assert left + right == pytest.approx(whole, rel=1e-7)


def test_symmetric_integrand_quadrant_is_a_quarter():
    f = lambda x, y: (x * x + y * y) ** 1.5 * (1.0 + 0.25 * (x * x + y * y)) ** -3.0  # noqa: E731
    full = integrate_or_raise(f, -2.0, 2.0, -2.0, 2.0)
    quadrant = integrate_or_raise(f, 0.0, 2.0, 0.0, 2.0)
    assert 4.0 * quadrant == pytest.approx(full, rel=1e-7)
