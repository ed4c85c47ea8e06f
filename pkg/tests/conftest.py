"""
Shared fixtures for the boostdecay tests
"""

import math

import numpy as np
import pytest

from boostdecay.cli.commands.figures import fit_stretched
from boostdecay.config.settings import get_settings
from boostdecay.models import ExpModeSet, LabContext, RestModel


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: quadrature-heavy or fit-heavy test")


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings so env overrides from one test never leak"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def boost():
    """Factory for the LabContext of a model at Lorentz factor gamma"""

    def make(model: RestModel, gamma: float) -> LabContext:
        return LabContext(p=model.M * math.sqrt(gamma * gamma - 1.0), M=model.M)

    return make


@pytest.fixture
def single_mode():
    """N = 1, Gamma = 1, Gamma/M = 1e-4"""
    return RestModel(modeset=ExpModeSet.single(1.0), M=1e4)


@pytest.fixture
def two_modes():
    """0.3 exp(-t/2) + 0.7 exp(-3t/2), Gamma_N/M = 1e-3"""
    return RestModel(modeset=ExpModeSet.from_arrays([0.3, 0.7], [1.0, 3.0]), M=3000.0)


@pytest.fixture
def eight_modes():
    """Equal weights, widths 0.5..4, Gamma_N/M = 1e-3"""
    widths = 0.5 * np.arange(1, 9)
    return RestModel(modeset=ExpModeSet.from_arrays([0.125] * 8, widths), M=4000.0)


def _stretched_fit(theta: float) -> ExpModeSet:
    modeset, _ = fit_stretched(theta, n_modes=8, seed=0)
    return modeset


@pytest.fixture(scope="session")
def stretched_half():
    """Eight-mode fit of exp(-sqrt(t)) in units of tau"""
    return _stretched_fit(0.5)


@pytest.fixture(scope="session")
def stretched_three_fifths():
    """Eight-mode fit of exp(-t^0.6) in units of tau"""
    return _stretched_fit(0.6)
