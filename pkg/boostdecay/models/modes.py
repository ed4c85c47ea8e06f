"""
Rest-frame decay models: exponential mode sets and sampled curves

Invariant violations raise DomainError directly from the validators, so
constructing an invalid model fails with the package's own error type.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import DomainError

WEIGHT_SUM_TOL = 1e-12


class ExpMode(BaseModel):
    """One exponential mode: weight w and decay width gamma"""

    model_config = ConfigDict(frozen=True)

    w: float
    gamma: float


class ExpModeSet(BaseModel):
    """Normalized superposition sum_j w_j exp(-Gamma_j t / 2) of the modulus"""

    model_config = ConfigDict(frozen=True)

    modes: List[ExpMode]

    @model_validator(mode="after")
    def check_invariants(self) -> "ExpModeSet":
        if not self.modes:
            raise DomainError("A mode set needs at least one mode")
        weights = [m.w for m in self.modes]
        widths = [m.gamma for m in self.modes]
        if not all(math.isfinite(w) and w > 0.0 for w in weights):
            raise DomainError("Mode weights must be positive and finite", details={"weights": weights})
        if abs(math.fsum(weights) - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError(
                f"Mode weights must sum to 1, got {math.fsum(weights)!r}",
                details={"weights": weights},
            )
        if not all(math.isfinite(g) and g > 0.0 for g in widths):
            raise DomainError("Decay widths must be positive and finite", details={"widths": widths})
        if any(b <= a for a, b in zip(widths, widths[1:])):
            raise DomainError("Decay widths must be strictly increasing", details={"widths": widths})
        return self

    @classmethod
    def from_arrays(cls, weights: Sequence[float], widths: Sequence[float]) -> "ExpModeSet":
        if len(weights) != len(widths):
            raise DomainError("weights and widths differ in length")
        return cls(modes=[ExpMode(w=float(w), gamma=float(g)) for w, g in zip(weights, widths)])

    @classmethod
    def single(cls, gamma: float) -> "ExpModeSet":
        return cls(modes=[ExpMode(w=1.0, gamma=gamma)])

    @property
    def n(self) -> int:
        return len(self.modes)

    @property
    def weights(self) -> np.ndarray:
        return np.array([m.w for m in self.modes])

    @property
    def widths(self) -> np.ndarray:
        return np.array([m.gamma for m in self.modes])

    @property
    def mean_width(self) -> float:
        """sum_j w_j Gamma_j"""
        return math.fsum(m.w * m.gamma for m in self.modes)


class RestModel(BaseModel):
    """
    Complete rest-frame model: mode set plus resonance mass M

    With ``strict`` the smallness condition Gamma_N / M <= ratio_max is
    enforced; reporting paths build non-strict models and surface the
    violation as a warning instead.
    """

    model_config = ConfigDict(frozen=True)

    modeset: ExpModeSet
    M: float
    ratio_max: float = Field(default_factory=lambda: get_settings().ratio_max)
    strict: bool = True

    @model_validator(mode="after")
    def check_mass(self) -> "RestModel":
        if not (math.isfinite(self.M) and self.M > 0.0):
            raise DomainError(f"Mass M must be positive and finite, got {self.M}")
        if self.ratio_max <= 0.0:
            raise DomainError("ratio_max must be positive")
        if self.strict and not self.is_small:
            raise DomainError(
                f"Gamma_N/M = {self.ratio:.3e} exceeds ratio_max = {self.ratio_max:.3e}",
                error_code="width_ratio",
                details={"ratio": self.ratio, "ratio_max": self.ratio_max},
            )
        return self

    @property
    def ratio(self) -> float:
        return self.modeset.modes[-1].gamma / self.M

    @property
    def is_small(self) -> bool:
        return self.ratio <= self.ratio_max


class SurvivalCurve(BaseModel):
    """Sampled canonical decay trace (t, value)"""

    model_config = ConfigDict(frozen=True)

    t: List[float]
    value: List[float]

    @model_validator(mode="after")
    def check_samples(self) -> "SurvivalCurve":
        if len(self.t) != len(self.value):
            raise DomainError("t and value columns differ in length")
        if not self.t:
            raise DomainError("A survival curve needs at least one sample")
        if not all(math.isfinite(x) for x in self.t + self.value):
            raise DomainError("Survival curve samples must be finite")
        if self.t[0] < 0.0 or any(b <= a for a, b in zip(self.t, self.t[1:])):
            raise DomainError("Sample times must be nonnegative and strictly increasing")
        if not all(0.0 < v <= 1.0 for v in self.value):
            raise DomainError("Survival values must lie in (0, 1]")
        if any(b > a for a, b in zip(self.value, self.value[1:])):
            raise DomainError("Survival values must be non-increasing in t")
        return self

    @classmethod
    def from_arrays(cls, t: Sequence[float], value: Sequence[float]) -> "SurvivalCurve":
        return cls(t=[float(x) for x in t], value=[float(v) for v in value])

    @property
    def times(self) -> np.ndarray:
        return np.asarray(self.t, dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.value, dtype=float)

    def __len__(self) -> int:
        return len(self.t)


class FitConfig(BaseModel):
    """Prony fit settings"""

    model_config = ConfigDict(frozen=True)

    n_modes: int = Field(ge=1)
    restarts: int = Field(default_factory=lambda: get_settings().fit_restarts, ge=1)
    seed: int = Field(default_factory=lambda: get_settings().fit_seed)
    max_iters: int = Field(default_factory=lambda: get_settings().fit_max_iters, ge=1)
    tolerance: float = Field(default_factory=lambda: get_settings().fit_tolerance, gt=0.0)
    target_rmse: Optional[float] = Field(default=None, gt=0.0)
    gamma_bounds: Optional[Tuple[float, float]] = None

    @model_validator(mode="after")
    def check_bounds(self) -> "FitConfig":
        if self.gamma_bounds is not None:
            lo, hi = self.gamma_bounds
            if not (0.0 < lo < hi):
                raise DomainError(f"gamma_bounds must satisfy 0 < lo < hi, got {self.gamma_bounds}")
        return self
