"""
Test the panel quadrature on integrals with closed forms
"""

import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from boostdecay.core.exceptions import PrecisionError
from boostdecay.models import QuadratureConfig
from boostdecay.services.quadrature import (
    PanelRule,
    SingularEndpoint,
    breakpoints,
    energy,
    graded_points,
    oscillatory_integral,
)


def exponential(m):
    return np.exp(-m)


def test_graded_points_double_outward():
    """Test breakpoints sit at center +- width/8 * 2^k inside the range"""
    points = np.sort(graded_points(10.0, 8.0, 0.0, 30.0))
    assert 10.0 in points
    assert 11.0 in points and 9.0 in points
    assert 18.0 in points and 2.0 in points
    assert np.all((points > 0.0) & (points < 30.0))


def test_breakpoints_respect_panel_phase():
    """Test no panel is wider than panel_phase / t"""
    edges = breakpoints(0.0, 50.0, 4.0, math.pi, [(20.0, 1.0)], 10_000)
    assert edges[0] == 0.0 and edges[-1] == 50.0
    assert np.max(np.diff(edges)) <= math.pi / 4.0 + 1e-12


def test_breakpoints_panel_limit():
    """Test exceeding max_panels raises PrecisionError"""
    with pytest.raises(PrecisionError) as excinfo:
        breakpoints(0.0, 1e4, 100.0, math.pi, [], 1000)
    assert excinfo.value.exit_code == 3


def test_panel_rule_is_exact_for_polynomials():
    """Test 16-point panels integrate a degree-9 polynomial exactly"""
    value, error = PanelRule(16).integrate(lambda m: m**9 + 0j, np.array([0.0, 0.5, 2.0]))
    assert value.real == pytest.approx(2.0**10 / 10.0, rel=1e-14)
    assert error <= 1e-10


@pytest.mark.parametrize("t", [0.0, 1.0, 10.0, 40.0])
def test_exponential_fourier_transform(t):
    """Test int_0^inf e^{-m} e^{-imt} dm = 1/(1 + it)"""
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-13)
    result = oscillatory_integral(exponential, 0.0, 60.0, 0.0, t, cfg, centers=[(0.0, 1.0)])
    assert abs(result.value - 1.0 / (1.0 + 1j * t)) <= 1e-10
    assert result.error <= max(cfg.abs_tol, cfg.rel_tol * abs(result.value))


@pytest.mark.parametrize("t", [0.0, 2.0, 15.0])
def test_jacobi_endpoint(t):
    """Test int_0^inf m^(1/2) e^{-m} e^{-imt} dm = Gamma(3/2) / (1 + it)^(3/2)"""
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-13)
    singular = SingularEndpoint(alpha=0.5, smooth=exponential)
    result = oscillatory_integral(
        lambda m: np.sqrt(m) * np.exp(-m),
        0.0,
        60.0,
        0.0,
        t,
        cfg,
        centers=[(0.0, 1.0)],
        singular=singular,
    )
    expected = gamma_fn(1.5) / (1.0 + 1j * t) ** 1.5
    assert abs(result.value - expected) <= 1e-9


def test_endpoint_tail_correction():
    """Test a slowly decaying weight is completed past the truncation"""
    p, t = 3.0, 5.0
    cfg = QuadratureConfig(rel_tol=1e-6, abs_tol=1e-9)

    def weight(m):
        return 1.0 / (1.0 + m * m)

    short = oscillatory_integral(weight, 0.0, 200.0, p, t, cfg, centers=[(0.0, 1.0)])
    long = oscillatory_integral(weight, 0.0, 2000.0, p, t, cfg, centers=[(0.0, 1.0)])
    assert abs(short.value - long.value) <= 1e-7


def test_non_convergence_raises():
    """Test an unattainable tolerance ends in PrecisionError with the estimate"""
    cfg = QuadratureConfig(rel_tol=1e-30, abs_tol=1e-30, max_panels=64)
    with pytest.raises(PrecisionError) as excinfo:
        oscillatory_integral(lambda m: np.abs(m - 0.3) ** 0.5, 0.0, 1.0, 0.0, 0.0, cfg)
    assert excinfo.value.error > 0.0
    assert excinfo.value.estimate != 0j


def test_energy():
    """Test E(m) = sqrt(p^2 + m^2)"""
    assert energy(np.array([4.0]), 3.0)[0] == 5.0
