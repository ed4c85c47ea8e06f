"""
Test the brute-force amplitude oracle
"""

import cmath
import math

import numpy as np
import pytest

from boostdecay.core.exceptions import DomainError, PrecisionError
from boostdecay.models import (
    BreitWigner,
    ExpModeSet,
    LabContext,
    LorentzianSum,
    QuadratureConfig,
    RestModel,
    SurvivalCurve,
    ThresholdPowerLaw,
)
from boostdecay.services.labframe import (
    breit_wigner_amplitude_lab,
    power_law_tail,
    power_law_tail_amplitude,
    survival_probability_lab,
)
from boostdecay.services.oracle import (
    amplitude_lab_oracle,
    amplitude_rest_oracle,
    double_integral_link_check,
    integrate_amplitude,
    lorentzian_cosine_transform,
    mdd_from_modulus,
    mdd_normalization,
    modulus_samples,
    negative_mass_contribution,
    tail_slope,
)

TIGHT = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-12)


@pytest.fixture
def lorentzian():
    """N = 1 Lorentzian, Gamma/M = 1e-3"""
    return LorentzianSum(modeset=ExpModeSet.single(1.0), M=1000.0)


@pytest.fixture
def threshold():
    """(m - 1)^(1/2) exp(-(m - 1)) normalized to unit mass"""
    return ThresholdPowerLaw.normalized(alpha=0.5, mu0=1.0, scale=1.0)


def test_lorentzian_normalization(lorentzian):
    """Test the folded Lorentzian sum carries unit mass"""
    assert mdd_normalization(lorentzian, TIGHT) == pytest.approx(1.0, abs=1e-8)


def test_threshold_normalization(threshold):
    """Test the Gauss-Jacobi endpoint panel integrates the threshold density"""
    assert mdd_normalization(threshold, TIGHT) == pytest.approx(1.0, abs=1e-8)


def test_gaussian_threshold_normalization():
    """Test the Gaussian form factor normalizes with its incomplete-gamma tail"""
    mdd = ThresholdPowerLaw.normalized(alpha=1.5, mu0=2.0, scale=0.5, profile="gaussian")
    assert mdd_normalization(mdd, TIGHT) == pytest.approx(1.0, abs=1e-8)


def test_breit_wigner_normalization():
    """Test the truncated Breit-Wigner is renormalized on m >= 0"""
    mdd = BreitWigner(M=10.0, Gamma=1.0)
    assert mdd_normalization(mdd, TIGHT) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("t", [0.0, 1.0, 5.0, 20.0])
def test_threshold_rest_amplitude_closed_form(threshold, t):
    """Test A_0(t) = e^{-i mu0 t} (1 + it)^(-3/2) for the exponential profile"""
    expected = cmath.exp(-1j * t) * (1.0 + 1j * t) ** -1.5
    assert abs(amplitude_rest_oracle(threshold, t) - expected) <= 1e-7


def test_rest_oracle_is_zero_momentum(lorentzian):
    """Test the lab oracle at p = 0 is the rest oracle"""
    cfg = QuadratureConfig(truncation_mass=11000.0)
    assert amplitude_lab_oracle(lorentzian, 0.0, 2.0, cfg) == amplitude_rest_oracle(lorentzian, 2.0, cfg)


@pytest.mark.parametrize("t", [1.0, 3.0, 10.0])
def test_negative_masses_are_negligible(lorentzian, t):
    """Test the m < 0 part of the Lorentzian is below 1e-5 of the amplitude"""
    cfg = QuadratureConfig(truncation_mass=11000.0)
    ratio = negative_mass_contribution(lorentzian, t, cfg) / abs(amplitude_rest_oracle(lorentzian, t, cfg))
    assert ratio <= 1e-5


def test_negative_mass_contribution_needs_lorentzian(threshold):
    """Test only the Lorentzian sum has a negative-mass part"""
    with pytest.raises(DomainError):
        negative_mass_contribution(threshold, 1.0)


def test_rest_oracle_matches_exponential():
    """Test the rest amplitude of a narrow Lorentzian decays as exp(-Gamma t / 2)"""
    mdd = LorentzianSum(modeset=ExpModeSet.single(1.0), M=1e4)
    cfg = QuadratureConfig(truncation_mass=2e4)
    for t in (1.0, 4.0, 8.0):
        assert abs(amplitude_rest_oracle(mdd, t, cfg)) ** 2 == pytest.approx(math.exp(-t), rel=1e-5)


def test_l0_sign_flips_amplitude(lorentzian):
    """Test l0 = -1 negates the amplitude and is Lorentzian-only"""
    cfg = QuadratureConfig(truncation_mass=11000.0)
    plus = integrate_amplitude(lorentzian, 100.0, 1.0, cfg).value
    minus = integrate_amplitude(lorentzian, 100.0, 1.0, cfg, l0=-1).value
    assert minus == pytest.approx(-plus, rel=1e-12)
    with pytest.raises(DomainError):
        integrate_amplitude(BreitWigner(M=10.0, Gamma=1.0), 1.0, 1.0, l0=-1)
    with pytest.raises(DomainError):
        integrate_amplitude(lorentzian, 1.0, 1.0, l0=2)


def test_oracle_rejects_bad_arguments(lorentzian):
    """Test negative times, momenta and a truncation below M"""
    with pytest.raises(DomainError):
        amplitude_lab_oracle(lorentzian, 1.0, -1.0)
    with pytest.raises(DomainError):
        amplitude_lab_oracle(lorentzian, -1.0, 1.0)
    with pytest.raises(DomainError):
        amplitude_lab_oracle(lorentzian, 1.0, 1.0, QuadratureConfig(truncation_mass=10.0))


def test_panel_budget_exceeded(lorentzian):
    """Test too small a panel budget raises PrecisionError"""
    with pytest.raises(PrecisionError):
        amplitude_lab_oracle(lorentzian, 1.0, 5.0, QuadratureConfig(max_panels=100))


@pytest.mark.parametrize("t", [2.0, 5.0, 10.0])
def test_breit_wigner_oracle_matches_closed_form(t):
    """Test the truncated Breit-Wigner closed form against quadrature"""
    M, Gamma = 1000.0, 1.0
    p = math.sqrt(3.0) * M
    cfg = QuadratureConfig(truncation_mass=11 * M)
    oracle = abs(amplitude_lab_oracle(BreitWigner(M=M, Gamma=Gamma), p, t, cfg)) ** 2
    closed = abs(breit_wigner_amplitude_lab(M, Gamma, p, t)) ** 2
    assert closed == pytest.approx(oracle, rel=1e-3)


def test_cosine_transform_recovers_lorentzian():
    """Test the sampled and closed-form cosine transforms of exp(-Gamma t / 2)"""
    modeset = ExpModeSet.single(2.0)
    times = np.linspace(0.0, 40.0, 2001)
    curve = SurvivalCurve.from_arrays(times, np.exp(-times))
    for offset in (0.0, 0.3, 2.0):
        closed = mdd_from_modulus(curve, 10.0, offset, modeset=modeset)
        sampled = mdd_from_modulus(curve, 10.0, offset)
        assert closed == pytest.approx(1.0 / (math.pi * (1.0 + offset**2)), rel=1e-12)
        assert sampled == pytest.approx(closed, rel=1e-9)


def test_cosine_transform_two_modes():
    """Test the log-linear sampled transform approximates a two-mode set"""
    modeset = ExpModeSet.from_arrays([0.3, 0.7], [1.0, 3.0])
    times = np.linspace(0.0, 60.0, 6001)
    curve = SurvivalCurve.from_arrays(times, 0.3 * np.exp(-0.5 * times) + 0.7 * np.exp(-1.5 * times))
    for offset in (0.0, 0.5, 1.5):
        expected = float(lorentzian_cosine_transform(modeset, np.array([offset]))[0])
        assert mdd_from_modulus(curve, 5.0, offset) == pytest.approx(expected, rel=1e-3)


def test_cosine_transform_needs_decay():
    """Test a flat modulus cannot be transformed"""
    curve = SurvivalCurve.from_arrays([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    with pytest.raises(PrecisionError):
        mdd_from_modulus(curve, 1.0, 0.0)


def test_cosine_transform_rejects_truncated_samples():
    """Test samples that stop before the modulus decays miss the tail tolerance"""
    times = np.linspace(0.0, 5.0, 101)
    curve = SurvivalCurve.from_arrays(times, np.exp(-times))
    with pytest.raises(PrecisionError, match="extrapolated mass"):
        mdd_from_modulus(curve, 10.0, 0.0)
    loose = QuadratureConfig(rel_tol=1e-1, abs_tol=1e-1)
    assert mdd_from_modulus(curve, 10.0, 0.0, loose) == pytest.approx(1.0 / math.pi, rel=1e-9)


def test_modulus_samples_cover_the_decay():
    """Test the link samples start at t = 0 and end below 1e-19"""
    modeset = ExpModeSet.from_arrays([0.3, 0.7], [1.0, 3.0])
    curve = modulus_samples(modeset)
    assert curve.times[0] == 0.0
    assert curve.values[0] == pytest.approx(1.0, rel=1e-15)
    assert curve.values[-1] < 1e-19
    assert np.all(np.diff(curve.values) < 0.0)


def test_double_integral_link(lorentzian):
    """Test the sampled-modulus double integral reproduces the lab oracle"""
    model = RestModel(modeset=lorentzian.modeset, M=lorentzian.M)
    p = math.sqrt(3.0) * model.M
    cfg = QuadratureConfig(truncation_mass=11000.0)
    linked = double_integral_link_check(model, p, 2.0, cfg)
    direct = abs(amplitude_lab_oracle(lorentzian, p, 2.0, cfg)) ** 2
    closed = survival_probability_lab(model, LabContext(p=p, M=model.M), 2.0).value
    assert linked == pytest.approx(direct, rel=1e-3)
    assert linked == pytest.approx(closed, rel=1e-3)


def test_double_integral_link_two_modes():
    """Test the link through log-linear samples of a two-mode modulus"""
    modeset = ExpModeSet.from_arrays([0.3, 0.7], [1.0, 3.0])
    model = RestModel(modeset=modeset, M=1000.0)
    p = math.sqrt(3.0) * model.M
    cfg = QuadratureConfig(truncation_mass=31000.0)
    for t in (1.0, 4.0):
        linked = double_integral_link_check(model, p, t, cfg)
        direct = abs(amplitude_lab_oracle(LorentzianSum(modeset=modeset, M=model.M), p, t, cfg)) ** 2
        assert linked == pytest.approx(direct, rel=2e-3)


def test_double_integral_link_at_rest(lorentzian):
    """Test p = 0 gives back P0(t)"""
    model = RestModel(modeset=lorentzian.modeset, M=lorentzian.M)
    cfg = QuadratureConfig(truncation_mass=11000.0)
    assert double_integral_link_check(model, 0.0, 2.0, cfg) == pytest.approx(math.exp(-2.0), rel=1e-3)


def test_double_integral_link_sees_a_wrong_modulus(lorentzian):
    """Test samples of a different modulus move the linked probability"""
    model = RestModel(modeset=lorentzian.modeset, M=lorentzian.M)
    p = math.sqrt(3.0) * model.M
    cfg = QuadratureConfig(truncation_mass=11000.0)
    wider = modulus_samples(ExpModeSet.single(1.2))
    linked = double_integral_link_check(model, p, 2.0, cfg, samples=wider)
    direct = abs(amplitude_lab_oracle(lorentzian, p, 2.0, cfg)) ** 2
    assert abs(linked / direct - 1.0) > 5e-2


@pytest.mark.slow
def test_lorentzian_inverse_power_tail():
    """Test |A_p|^2 falls as 1/t once the exponential has died out"""
    mdd = LorentzianSum(modeset=ExpModeSet.single(1.0), M=100.0)
    p = math.sqrt(3.0) * 100.0
    cfg = QuadratureConfig(truncation_mass=2100.0)
    slope = tail_slope(mdd, p, np.geomspace(100.0, 400.0, 5), cfg)
    assert slope == pytest.approx(-1.0, rel=5e-2)


def test_threshold_rest_tail(threshold):
    """Test the threshold law approaches its t^-3 tail at rest"""
    spec = threshold.tail
    cfg = QuadratureConfig(truncation_mass=41.0)
    slope = tail_slope(threshold, 0.0, np.geomspace(50.0, 200.0, 4), cfg)
    assert slope == pytest.approx(-3.0, rel=1e-2)
    amplitude = amplitude_rest_oracle(threshold, 200.0, cfg)
    assert abs(amplitude) ** 2 == pytest.approx(power_law_tail(spec, 0.0, 200.0), rel=1e-3)
    expected = power_law_tail_amplitude(spec, 0.0, 200.0)
    assert abs(amplitude - expected) <= 1e-2 * abs(expected)


@pytest.mark.slow
def test_threshold_lab_tail_scales_with_chi(threshold):
    """Test the boosted threshold tail follows (chi_p / t)^3"""
    cfg = QuadratureConfig(truncation_mass=41.0)
    p, t = 1.0, 400.0
    amplitude = amplitude_lab_oracle(threshold, p, t, cfg)
    assert abs(amplitude) ** 2 == pytest.approx(power_law_tail(threshold.tail, p, t), rel=5e-2)
