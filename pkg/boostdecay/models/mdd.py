"""
Mass distribution densities and quadrature settings for the oracle
"""

import math
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import gamma as gamma_fn

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import DomainError
from boostdecay.models.frames import TailSpec
from boostdecay.models.modes import ExpModeSet


class LorentzianSum(BaseModel):
    """sum_j (w_j Gamma_j / 2pi) / ((m - M)^2 + Gamma_j^2/4) on the whole real line"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["lorentzian_sum"] = "lorentzian_sum"
    modeset: ExpModeSet
    M: float

    @model_validator(mode="after")
    def check_mass(self) -> "LorentzianSum":
        if not (math.isfinite(self.M) and self.M > 0.0):
            raise DomainError(f"Mass M must be positive, got {self.M}")
        return self

    @property
    def lower(self) -> float:
        return -math.inf

    @property
    def max_width(self) -> float:
        return self.modeset.modes[-1].gamma

    def density(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        d = (m - self.M) ** 2
        out = np.zeros_like(m)
        for mode in self.modeset.modes:
            out += (mode.w * mode.gamma / (2.0 * math.pi)) / (d + 0.25 * mode.gamma**2)
        return out


class BreitWigner(BaseModel):
    """Lorentzian truncated to m >= 0, normalized to unit mass"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["breit_wigner"] = "breit_wigner"
    M: float
    Gamma: float

    @model_validator(mode="after")
    def check_values(self) -> "BreitWigner":
        if not (self.M > 0.0 and self.Gamma > 0.0):
            raise DomainError("Breit-Wigner needs M > 0 and Gamma > 0")
        return self

    @property
    def lower(self) -> float:
        return 0.0

    @property
    def max_width(self) -> float:
        return self.Gamma

    @property
    def norm(self) -> float:
        """Mass of the untruncated Lorentzian on m >= 0"""
        return 0.5 + math.atan(2.0 * self.M / self.Gamma) / math.pi

    def density(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        lorentz = (self.Gamma / (2.0 * math.pi)) / ((m - self.M) ** 2 + 0.25 * self.Gamma**2)
        return np.where(m >= 0.0, lorentz / self.norm, 0.0)


class ThresholdPowerLaw(BaseModel):
    """
    (m - mu0)^alpha omega0(m) above the threshold mu0

    ``profile`` names the smooth form factor: ``exponential`` is
    exp(-(m - mu0)/scale), ``gaussian`` is exp(-((m - mu0)/scale)^2). The
    tail's omega0_at_mu0 is the normalization constant of the profile.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["threshold_power_law"] = "threshold_power_law"
    tail: TailSpec
    profile: Literal["exponential", "gaussian"] = "exponential"
    scale: float = 1.0

    @model_validator(mode="after")
    def check_scale(self) -> "ThresholdPowerLaw":
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise DomainError(f"Form-factor scale must be positive, got {self.scale}")
        return self

    @classmethod
    def normalized(
        cls,
        alpha: float,
        mu0: float,
        scale: float = 1.0,
        profile: str = "exponential",
    ) -> "ThresholdPowerLaw":
        """Build the density with omega0(mu0) chosen so that it integrates to one"""
        if profile == "exponential":
            mass = gamma_fn(1.0 + alpha) * scale ** (1.0 + alpha)
        elif profile == "gaussian":
            mass = 0.5 * gamma_fn(0.5 * (1.0 + alpha)) * scale ** (1.0 + alpha)
        else:
            raise DomainError(f"Unknown form-factor profile: {profile}")
        tail = TailSpec(alpha=alpha, mu0=mu0, omega0_at_mu0=1.0 / mass)
        return cls(tail=tail, profile=profile, scale=scale)

    @property
    def lower(self) -> float:
        return self.tail.mu0

    @property
    def max_width(self) -> float:
        return self.scale

    @property
    def M(self) -> float:
        return self.tail.mu0 + self.scale

    def form_factor(self, m: np.ndarray) -> np.ndarray:
        x = (np.asarray(m, dtype=float) - self.tail.mu0) / self.scale
        if self.profile == "exponential":
            shape = np.exp(-x)
        else:
            shape = np.exp(-x * x)
        return self.tail.omega0_at_mu0 * shape

    def density(self, m: np.ndarray) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        above = np.clip(m - self.tail.mu0, 0.0, None)
        return np.where(m >= self.tail.mu0, above**self.tail.alpha * self.form_factor(m), 0.0)


MddSpec = Annotated[Union[LorentzianSum, BreitWigner, ThresholdPowerLaw], Field(discriminator="kind")]


class QuadratureConfig(BaseModel):
    """Panel quadrature settings for the oracle"""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default_factory=lambda: get_settings().quad_rel_tol, gt=0.0)
    abs_tol: float = Field(default_factory=lambda: get_settings().quad_abs_tol, gt=0.0)
    max_panels: int = Field(default_factory=lambda: get_settings().quad_max_panels, ge=1)
    truncation_mass: Optional[float] = None
    nodes: int = Field(default_factory=lambda: get_settings().quad_nodes, ge=4)
    panel_phase: float = Field(default_factory=lambda: get_settings().quad_panel_phase, gt=0.0)

    def m_max(self, M: float, max_width: float) -> float:
        """Upper truncation of the mass integral"""
        if self.truncation_mass is not None:
            if self.truncation_mass <= M:
                raise DomainError(f"truncation_mass must exceed M = {M}")
            return self.truncation_mass
        settings = get_settings()
        return M + max(
            settings.truncation_width_factor * max_width,
            settings.truncation_mass_factor * M,
        )
