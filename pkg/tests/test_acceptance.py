"""
End-to-end checks of the closed forms, windows and time map on the
stretched-exponential regimes
"""

import math

import numpy as np
import pytest

from boostdecay.cli.commands.figures import CAPTIONS, FIT_GRID, FIT_TARGET_RMSE, fit_stretched
from boostdecay.core.exceptions import FitError
from boostdecay.models import ExpModeSet, LabContext, LorentzianSum, QuadratureConfig, RestModel
from boostdecay.services.labframe import survival_probability_lab
from boostdecay.services.oracle import amplitude_lab_oracle
from boostdecay.services.prony import rmse, stretched_exponential_curve
from boostdecay.services.timemap import linearity_diagnostic, phi_p_grid, scaling_law_deviation, window_lengths
from boostdecay.services.windows import exponential_window, validity_lower_bound

pytestmark = pytest.mark.slow

BOOSTS = [math.sqrt(2.0), 2.0, 3.0]


def _oracle_agreement(model: RestModel, ctx: LabContext, times) -> float:
    cfg = QuadratureConfig(truncation_mass=model.M + 1e4 * model.modeset.modes[-1].gamma)
    mdd = LorentzianSum(modeset=model.modeset, M=model.M)
    worst = 0.0
    for t in times:
        closed = survival_probability_lab(model, ctx, t)
        assert not closed.warnings
        oracle = abs(amplitude_lab_oracle(mdd, ctx.p, t, cfg)) ** 2
        worst = max(worst, abs(closed.value - oracle) / oracle)
    return worst


def _window_times(model: RestModel, ctx: LabContext, count: int = 5):
    """Times inside I_p with pt >= 1e3 and t <= 40"""
    window = exponential_window(model, ctx).I_p
    lo = max(window.lower, validity_lower_bound(model, ctx), 1e3 / ctx.p)
    hi = min(window.upper, 40.0)
    assert lo < hi
    times = [t for t in np.geomspace(lo, hi, count) if window.contains(t)]
    assert len(times) >= 2
    return times


@pytest.mark.parametrize("gamma", BOOSTS)
def test_oracle_single_mode(boost, gamma):
    """Test one mode against quadrature across its exponential window"""
    model = RestModel(modeset=ExpModeSet.single(1.0), M=1000.0)
    ctx = boost(model, gamma)
    assert _oracle_agreement(model, ctx, _window_times(model, ctx)) <= 1e-3


@pytest.mark.parametrize("gamma", BOOSTS)
def test_oracle_two_modes(two_modes, boost, gamma):
    """Test two modes against quadrature across their exponential window"""
    ctx = boost(two_modes, gamma)
    assert _oracle_agreement(two_modes, ctx, _window_times(two_modes, ctx)) <= 1e-3


@pytest.mark.parametrize("gamma", BOOSTS)
def test_oracle_eight_modes(eight_modes, boost, gamma):
    """Test eight modes against quadrature across their exponential window"""
    ctx = boost(eight_modes, gamma)
    assert _oracle_agreement(eight_modes, ctx, _window_times(eight_modes, ctx)) <= 1e-3


@pytest.fixture(params=[0.5, 0.6], ids=["theta_1/2", "theta_3/5"])
def stretched(request, stretched_half, stretched_three_fifths):
    return request.param, {0.5: stretched_half, 0.6: stretched_three_fifths}[request.param]


def test_stretched_fit_quality(stretched):
    """Test the eight-mode fits reproduce the modulus on [1, 100]"""
    theta, modeset = stretched
    curve = stretched_exponential_curve(1.0, theta, np.geomspace(1.0, 100.0, 200))
    assert modeset.n == 8
    assert rmse(modeset, curve) <= 1e-3


@pytest.mark.parametrize("gamma", BOOSTS)
def test_dilation_in_window(stretched, boost, gamma):
    """Test phi_p(t) = t / gamma and P_p(t) = P_0(t / gamma) across I_p"""
    _, modeset = stretched
    model = RestModel(modeset=modeset, M=600.0)
    ctx = boost(model, gamma)
    report = exponential_window(model, ctx)
    assert not report.is_empty

    t_floor = max(1.0, validity_lower_bound(model, ctx))
    diagnostic = linearity_diagnostic(model, ctx, report.I_p, t_floor=t_floor)
    assert diagnostic.max_deviation <= 5e-2
    assert scaling_law_deviation(model, ctx, diagnostic.times) <= 5e-2

    t_0, t_p = window_lengths(report)
    assert t_p == pytest.approx(gamma * t_0, rel=1e-12)


@pytest.mark.parametrize("figure", [1, 2])
def test_transform_regimes(figure, stretched_half, stretched_three_fifths):
    """Test P_p decreases on [3, 20] and grows with gamma at fixed t"""
    captions = [c for c in CAPTIONS if c.figure == figure]
    modeset = stretched_three_fifths if figure == 1 else stretched_half
    times = np.linspace(3.0, 20.0, 171)
    at_ten = []
    for caption in captions:
        model = RestModel(modeset=modeset, M=caption.M)
        ctx = LabContext(p=caption.p, M=caption.M)
        assert ctx.gamma == pytest.approx(caption.gamma, rel=1e-3)
        values = np.array([survival_probability_lab(model, ctx, t).value for t in times])
        assert np.all(np.diff(values) < 0.0)
        at_ten.append((ctx.gamma, survival_probability_lab(model, ctx, 10.0).value))
    at_ten.sort()
    assert all(a[1] < b[1] for a, b in zip(at_ten, at_ten[1:]))


@pytest.mark.parametrize("figure", [3, 4])
def test_time_map_regimes(figure, stretched_half, stretched_three_fifths):
    """Test phi_p is linear with slope 1/gamma over each caption range inside I_p"""
    captions = [c for c in CAPTIONS if c.figure == figure]
    modeset = stretched_three_fifths if figure == 3 else stretched_half
    for caption in captions:
        model = RestModel(modeset=modeset, M=caption.M)
        ctx = LabContext(p=caption.p, M=caption.M)
        phi = np.array([e.phi for e in phi_p_grid(model, ctx, np.linspace(*caption.t_range, 50))])
        assert np.all(np.isfinite(phi))
        assert np.all(phi >= 0.0)

        # the fits only constrain P_0 for t <= FIT_GRID[1]
        report = exponential_window(model, ctx)
        t_floor = max(caption.t_range[0], validity_lower_bound(model, ctx))
        t_ceiling = min(caption.t_range[1], ctx.gamma * FIT_GRID[1])
        diagnostic = linearity_diagnostic(model, ctx, report.I_p, t_floor=t_floor, t_ceiling=t_ceiling)
        assert diagnostic.times[0] >= t_floor
        assert diagnostic.times[-1] <= t_ceiling
        assert diagnostic.max_deviation <= 5e-2
        assert diagnostic.slope_deviation <= 5e-2


def test_figure_fits_meet_target():
    """Test the figure fits reach RMSE 1e-3 on their own sample grid"""
    lo, hi, n = FIT_GRID
    for theta in (0.5, 0.6):
        modeset, report = fit_stretched(theta)
        assert report["rmse"] <= FIT_TARGET_RMSE
        assert report["converged"]
        assert rmse(modeset, stretched_exponential_curve(1.0, theta, np.geomspace(lo, hi, n))) <= FIT_TARGET_RMSE


def test_figure_fit_rejects_poor_fit():
    """Test a fit that misses the target RMSE raises instead of writing data"""
    with pytest.raises(FitError, match="exceeds target"):
        fit_stretched(0.5, n_modes=1, restarts=2)
