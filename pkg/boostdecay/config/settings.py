"""
Configuration settings for boostdecay
"""

import math
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults shared by the services and the CLI"""

    model_config = SettingsConfigDict(
        env_prefix="BOOSTDECAY_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Rest-frame model
    ratio_max: float = Field(default=1e-2, gt=0.0)  # Gamma_N / M smallness
    validity_factor: float = Field(default=10.0, gt=1.0)  # operational ">>"

    # Exponential window
    zeta_threshold: float = Field(default=1e-2, gt=0.0)
    dominance_factor: float = Field(default=1e-2, gt=0.0, lt=1.0)
    xi_reference: float = Field(default=1e-2, gt=0.0)
    zeta_xtol: float = Field(default=1e-10, gt=0.0)

    # Prony fitting
    fit_restarts: int = Field(default=12, ge=1)
    fit_max_iters: int = Field(default=4000, ge=1)
    fit_tolerance: float = Field(default=1e-12, gt=0.0)
    fit_seed: int = 0
    merge_rtol: float = Field(default=1e-9, gt=0.0)

    # Time map
    inverse_residual_tol: float = Field(default=1e-12, gt=0.0)
    newton_switch_width: float = Field(default=1e-3, gt=0.0)
    linearity_grid_size: int = Field(default=64, ge=2)

    # Quadrature oracle
    quad_rel_tol: float = Field(default=1e-6, gt=0.0)
    quad_abs_tol: float = Field(default=1e-9, gt=0.0)
    quad_nodes: int = Field(default=16, ge=4)
    quad_max_panels: int = Field(default=4_000_000, ge=1)
    quad_panel_phase: float = Field(default=math.pi, gt=0.0)
    truncation_width_factor: float = Field(default=1e4, gt=0.0)
    truncation_mass_factor: float = Field(default=50.0, gt=0.0)

    # Logging Configuration
    log_level: str = "INFO"
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@lru_cache()
def get_settings() -> Settings:
    """Get application settings"""
    return Settings()
