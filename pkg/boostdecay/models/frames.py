"""
Laboratory-frame context and related value types
"""

import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator

from boostdecay.core.exceptions import DomainError


class LabContext(BaseModel):
    """Linear momentum p of a system of rest mass M"""

    model_config = ConfigDict(frozen=True)

    p: float
    M: float

    @model_validator(mode="after")
    def check_values(self) -> "LabContext":
        if not (math.isfinite(self.M) and self.M > 0.0):
            raise DomainError(f"Mass M must be positive and finite, got {self.M}")
        if not (math.isfinite(self.p) and self.p >= 0.0):
            raise DomainError(f"Momentum p must be nonnegative and finite, got {self.p}")
        return self

    @property
    def gamma(self) -> float:
        """Lorentz factor sqrt(1 + p^2/M^2)"""
        return math.hypot(1.0, self.p / self.M)

    @property
    def beta_gamma(self) -> float:
        """p/M = sqrt(gamma^2 - 1)"""
        return self.p / self.M


class ComplexRate(BaseModel):
    """Complex rate re + i im (Upsilon = Lambda_- + i Lambda_+)"""

    model_config = ConfigDict(frozen=True)

    re: float
    im: float

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


class TailSpec(BaseModel):
    """Threshold behaviour (m - mu0)^alpha omega0(m) of a mass distribution"""

    model_config = ConfigDict(frozen=True)

    alpha: float
    mu0: float
    omega0_at_mu0: float

    @model_validator(mode="after")
    def check_values(self) -> "TailSpec":
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise DomainError(f"alpha must be nonnegative, got {self.alpha}")
        if not (math.isfinite(self.mu0) and self.mu0 > 0.0):
            raise DomainError(f"mu0 must be positive, got {self.mu0}")
        if not math.isfinite(self.omega0_at_mu0):
            raise DomainError("omega0(mu0) must be finite")
        return self


class ValidityWarning(BaseModel):
    """A regime condition that does not hold at the evaluated point"""

    model_config = ConfigDict(frozen=True)

    kind: str
    message: str
    margin: Optional[float] = None
    required: Optional[float] = None
