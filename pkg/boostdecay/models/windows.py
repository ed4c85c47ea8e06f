"""
Time-interval and exponential-window models
"""

import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from boostdecay.core.exceptions import DomainError
from boostdecay.models.frames import ValidityWarning

Interval = Tuple[float, float]


class IntervalSet(BaseModel):
    """
    Union of closed time intervals in normal form

    Intervals are sorted by their left end and overlapping or touching
    intervals are merged on construction, so normalizing twice is a no-op.
    """

    model_config = ConfigDict(frozen=True)

    intervals: List[Interval] = []

    @field_validator("intervals")
    @classmethod
    def normalize(cls, value: List[Interval]) -> List[Interval]:
        cleaned: List[Interval] = []
        for lo, hi in value:
            lo, hi = float(lo), float(hi)
            if math.isnan(lo) or math.isnan(hi) or lo > hi:
                raise DomainError(f"Invalid interval [{lo}, {hi}]")
            cleaned.append((lo, hi))
        cleaned.sort()
        merged: List[Interval] = []
        for lo, hi in cleaned:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return merged

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_closed_interval(self) -> bool:
        return len(self.intervals) == 1

    @property
    def lower(self) -> float:
        if self.is_empty:
            raise DomainError("Empty interval set has no lower bound")
        return self.intervals[0][0]

    @property
    def upper(self) -> float:
        if self.is_empty:
            raise DomainError("Empty interval set has no upper bound")
        return self.intervals[-1][1]

    @property
    def measure(self) -> float:
        """Total length of the union"""
        return math.fsum(hi - lo for lo, hi in self.intervals)

    def contains(self, t: float) -> bool:
        return any(lo <= t <= hi for lo, hi in self.intervals)

    def scaled(self, factor: float) -> "IntervalSet":
        if factor <= 0.0:
            raise DomainError("Scale factor must be positive")
        return IntervalSet(intervals=[(lo * factor, hi * factor) for lo, hi in self.intervals])

    def clipped(self, floor: float, ceiling: float = math.inf) -> "IntervalSet":
        """Intersection with [floor, ceiling]"""
        return IntervalSet(
            intervals=[
                (max(lo, floor), min(hi, ceiling))
                for lo, hi in self.intervals
                if hi >= floor and lo <= ceiling and floor <= ceiling
            ]
        )


class ZetaBounds(BaseModel):
    """Roots zeta_min < 1/2 < zeta_max of K(zeta) = threshold"""

    model_config = ConfigDict(frozen=True)

    zeta_min: float
    zeta_max: float
    threshold: float

    @model_validator(mode="after")
    def check_order(self) -> "ZetaBounds":
        if not (0.0 < self.zeta_min < 0.5 < self.zeta_max):
            raise DomainError(
                f"Expected 0 < zeta_min < 1/2 < zeta_max, got ({self.zeta_min}, {self.zeta_max})"
            )
        return self

    @property
    def ratio(self) -> float:
        return self.zeta_min / self.zeta_max


class ConstraintMargins(BaseModel):
    """Validity margins at the left edge of the lab window"""

    model_config = ConfigDict(frozen=True)

    t: float
    pt: float
    t_gamma1: float  # 10 Gamma_1 t, > 1 means t > 1/(10 Gamma_1)
    Mt: float

    def failing(self, factor: float) -> List[ValidityWarning]:
        warnings: List[ValidityWarning] = []
        if self.pt < factor:
            warnings.append(
                ValidityWarning(
                    kind="pt",
                    message=f"pt = {self.pt:.4g} at window start is not >> 1",
                    margin=self.pt,
                    required=factor,
                )
            )
        if self.t_gamma1 <= 1.0 and self.Mt < factor:
            warnings.append(
                ValidityWarning(
                    kind="early_time",
                    message=(
                        f"window start violates t > 1/(10 Gamma_1) ({self.t_gamma1:.4g}) "
                        f"and Mt >> 1 ({self.Mt:.4g})"
                    ),
                    margin=max(self.t_gamma1, self.Mt / factor),
                    required=1.0,
                )
            )
        return warnings


class ModeWindow(BaseModel):
    """Window of one dominant mode j (1-based) in both frames"""

    model_config = ConfigDict(frozen=True)

    j: int
    w: float
    gamma: float
    xi: float
    lab: Interval
    rest: Interval


class WindowReport(BaseModel):
    """Exponential-time window estimate in the lab and rest frames"""

    model_config = ConfigDict(frozen=True)

    gamma: float
    zeta: ZetaBounds
    dominance_factor: float
    xi_limit: float
    xi: List[float]
    dominant_indices: List[int]
    modes: List[ModeWindow]
    I_p: IntervalSet
    I_0: IntervalSet
    closed_interval: bool
    constraint_margins: Optional[ConstraintMargins] = None
    warnings: List[ValidityWarning] = []
    smallest_failing_xi: Optional[float] = None
    admitting_dominance_factor: Optional[float] = None

    @model_validator(mode="after")
    def check_indices(self) -> "WindowReport":
        idx = self.dominant_indices
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DomainError("Dominant indices must be strictly increasing")
        if idx and not (1 <= idx[0] and idx[-1] <= len(self.xi)):
            raise DomainError("Dominant indices out of range")
        return self

    @property
    def is_empty(self) -> bool:
        return not self.dominant_indices
