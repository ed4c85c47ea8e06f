"""
Test mode-set evaluation and Prony fitting
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boostdecay.core.exceptions import DomainError, FitError, InputError
from boostdecay.models import ExpModeSet, FitConfig, SurvivalCurve
from boostdecay.services.prony import (
    _Candidate,
    _polish,
    evaluate_modulus,
    evaluate_modulus_grid,
    fit_prony,
    project_modes,
    rmse,
    stretched_exponential,
    stretched_exponential_curve,
    survival_probability_rest,
)


@st.composite
def modesets(draw, max_modes=5):
    n = draw(st.integers(min_value=1, max_value=max_modes))
    raw = draw(st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=n, max_size=n))
    gaps = draw(st.lists(st.floats(min_value=0.05, max_value=3.0), min_size=n, max_size=n))
    weights = np.array(raw) / math.fsum(raw)
    weights[-1] = 1.0 - math.fsum(weights[:-1])
    return ExpModeSet.from_arrays(weights, np.cumsum(gaps))


def test_evaluate_modulus_example():
    """Test the two-mode example value and its square"""
    model = ExpModeSet.from_arrays([0.5, 0.5], [1.0, 2.0])
    assert evaluate_modulus(model, 2.0) == pytest.approx(0.2516, abs=1e-4)
    assert survival_probability_rest(model, 2.0) == pytest.approx(0.0633, abs=1e-4)
    assert evaluate_modulus(model, 0.0) == 1.0


def test_evaluate_modulus_rejects_negative_time():
    """Test t < 0 raises DomainError"""
    with pytest.raises(DomainError):
        evaluate_modulus(ExpModeSet.single(1.0), -1.0)


@given(modesets(), st.floats(min_value=0.0, max_value=50.0), st.floats(min_value=1e-3, max_value=5.0))
@settings(max_examples=100, deadline=None)
def test_modulus_decreasing_and_convex(model, t, dt):
    """Test the modulus is in (0, 1], decreasing and convex"""
    a, b, c = (evaluate_modulus(model, t + k * dt) for k in range(3))
    assert 0.0 < a <= 1.0
    assert b <= a
    assert a - 2.0 * b + c >= -1e-15


@given(modesets())
@settings(max_examples=50, deadline=None)
def test_grid_matches_scalar(model):
    """Test the vectorised evaluation against the scalar one"""
    times = np.linspace(0.0, 10.0, 11)
    grid = evaluate_modulus_grid(model, times)
    scalar = [evaluate_modulus(model, t) for t in times]
    np.testing.assert_allclose(grid, scalar, rtol=1e-13)


def test_stretched_exponential_values():
    """Test exp(-(t/tau)^theta) at t = 4 tau, theta = 1/2"""
    assert stretched_exponential(4.0, 1.0, 0.5) == pytest.approx(math.exp(-2.0), rel=1e-15)
    assert stretched_exponential(0.0, 1.0, 0.5) == 1.0


@pytest.mark.parametrize("theta", [0.0, 1.0, 1.5, -0.2])
def test_stretched_exponential_theta_range(theta):
    """Test theta outside (0, 1) is rejected"""
    with pytest.raises(DomainError):
        stretched_exponential(1.0, 1.0, theta)


def test_stretched_exponential_limit():
    """Test theta = 1 is accepted with allow_limit"""
    assert stretched_exponential(2.0, 1.0, 1.0, allow_limit=True) == pytest.approx(math.exp(-2.0))


def test_fit_single_mode_exact():
    """Test a pure exponential is recovered to machine precision"""
    times = np.linspace(0.0, 10.0, 60)
    curve = SurvivalCurve.from_arrays(times, np.exp(-0.5 * 1.7 * times))
    model, report = fit_prony(curve, FitConfig(n_modes=1, seed=0))
    assert model.n == 1
    assert model.modes[0].gamma == pytest.approx(1.7, rel=1e-8)
    assert report.rmse <= 1e-10


def test_fit_two_modes_recovers_parameters():
    """Test 0.3 exp(-t/2) + 0.7 exp(-3t/2) is recovered to 1e-6"""
    times = np.linspace(0.0, 12.0, 200)
    curve = SurvivalCurve.from_arrays(times, 0.3 * np.exp(-0.5 * times) + 0.7 * np.exp(-1.5 * times))
    model, report = fit_prony(curve, FitConfig(n_modes=2, seed=0))
    np.testing.assert_allclose(model.weights, [0.3, 0.7], atol=1e-6)
    np.testing.assert_allclose(model.widths, [1.0, 3.0], atol=1e-6)
    assert report.rmse <= 1e-9


def test_fit_is_deterministic():
    """Test two fits with one seed give identical mode sets"""
    times = np.linspace(0.0, 12.0, 80)
    curve = SurvivalCurve.from_arrays(times, 0.3 * np.exp(-0.5 * times) + 0.7 * np.exp(-1.5 * times))
    cfg = FitConfig(n_modes=3, seed=7, restarts=3)
    first, first_report = fit_prony(curve, cfg)
    second, second_report = fit_prony(curve, cfg)
    assert first == second
    assert first_report.restart_rmse == second_report.restart_rmse


@pytest.mark.slow
def test_fit_stretched_exponential_rmse():
    """Test eight modes fit exp(-sqrt(t)) on [1, 100] to RMSE 1e-3"""
    times = np.linspace(1.0, 100.0, 200)
    curve = stretched_exponential_curve(1.0, 0.5, times)
    model, report = fit_prony(curve, FitConfig(n_modes=8, seed=0))
    assert report.rmse <= 1e-3
    assert rmse(model, curve) == pytest.approx(report.rmse)
    assert math.fsum(model.weights) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(model.widths) > 0.0)


def test_fit_needs_enough_samples():
    """Test fewer than 2N samples raise InputError"""
    curve = SurvivalCurve.from_arrays([0.0, 1.0, 2.0], [1.0, 0.6, 0.4])
    with pytest.raises(InputError):
        fit_prony(curve, FitConfig(n_modes=2))


def test_fit_error_carries_best_model():
    """Test an unreachable target RMSE raises FitError with the best model"""
    times = np.linspace(1.0, 100.0, 60)
    curve = stretched_exponential_curve(1.0, 0.5, times)
    with pytest.raises(FitError) as excinfo:
        fit_prony(curve, FitConfig(n_modes=1, seed=0, restarts=2, target_rmse=1e-12))
    assert isinstance(excinfo.value.best, ExpModeSet)
    assert excinfo.value.report.rmse > 1e-12
    assert excinfo.value.exit_code == 3


def test_fit_reports_optimizer_exhaustion():
    """Test an iteration budget too small to converge raises FitError"""
    times = np.linspace(0.0, 10.0, 40)
    model = ExpModeSet.from_arrays([0.4, 0.6], [0.5, 2.0])
    curve = SurvivalCurve.from_arrays(times, evaluate_modulus_grid(model, times))
    with pytest.raises(FitError, match="did not converge") as excinfo:
        fit_prony(curve, FitConfig(n_modes=2, seed=0, restarts=3, max_iters=1))
    assert excinfo.value.report.converged is False
    assert isinstance(excinfo.value.best, ExpModeSet)


def test_polish_flags_convergence_from_solver_status():
    """Test the least-squares polish reports convergence only when a tolerance is met"""
    times = np.linspace(0.0, 10.0, 40)
    model = ExpModeSet.from_arrays([0.4, 0.6], [0.5, 2.0])
    values = evaluate_modulus_grid(model, times)
    start = _Candidate(np.array([0.5, 0.5]), np.array([0.4, 2.5]), 1.0)
    polished = _polish(times, values, start, FitConfig(n_modes=2, seed=0))
    assert polished is not None and polished.converged
    assert _polish(times, values, start, FitConfig(n_modes=2, seed=0, max_iters=1)) is None


def test_project_modes_merges_and_normalizes():
    """Test degenerate widths merge and weights renormalize"""
    model, merges = project_modes([0.2, 0.2, 0.4], [2.0, 1.0, 1.0 + 1e-12])
    assert merges == 1
    assert model.n == 2
    assert math.fsum(model.weights) == pytest.approx(1.0, abs=1e-12)
    assert model.widths[0] == pytest.approx(1.0)


@pytest.mark.parametrize(
    "weights, widths",
    [
        ([0.5, 0.6], [1.0, 2.0]),
        ([0.5, 0.5], [2.0, 1.0]),
        ([1.0], [0.0]),
        ([1.5, -0.5], [1.0, 2.0]),
    ],
)
def test_modeset_invariants(weights, widths):
    """Test invalid mode sets raise DomainError"""
    with pytest.raises(DomainError):
        ExpModeSet.from_arrays(weights, widths)
