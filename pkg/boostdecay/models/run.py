"""
CLI run configuration
"""

import math
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from boostdecay.core.exceptions import InputError

Command = Literal["fit", "transform", "window", "phi", "oracle-compare", "figures"]


class GridSpec(BaseModel):
    """Time grid ``min:max:n[:geom]``"""

    model_config = ConfigDict(frozen=True)

    t_min: float
    t_max: float
    points: int
    geometric: bool = False

    @model_validator(mode="after")
    def check_grid(self) -> "GridSpec":
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)):
            raise InputError("Grid bounds must be finite")
        if self.points < 2:
            raise InputError(f"Grid needs at least 2 points, got {self.points}")
        if not self.t_min < self.t_max:
            raise InputError(f"Grid needs t_min < t_max, got {self.t_min} >= {self.t_max}")
        if self.t_min < 0.0:
            raise InputError("Grid times must be nonnegative")
        if self.geometric and self.t_min <= 0.0:
            raise InputError("Geometric grid needs t_min > 0")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise InputError(f"Grid must look like min:max:n[:geom], got {text!r}")
        spacing = parts[3].strip().lower() if len(parts) == 4 else "lin"
        if spacing not in ("geom", "lin"):
            raise InputError(f"Grid spacing must be 'geom' or 'lin', got {spacing!r}")
        try:
            t_min, t_max, points = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as e:
            raise InputError(f"Cannot parse grid {text!r}: {e}") from e
        return cls(t_min=t_min, t_max=t_max, points=points, geometric=(spacing == "geom"))

    def values(self) -> np.ndarray:
        if self.geometric:
            return np.geomspace(self.t_min, self.t_max, self.points)
        return np.linspace(self.t_min, self.t_max, self.points)


class RunConfig(BaseModel):
    """Validated flags of one CLI invocation"""

    model_config = ConfigDict(frozen=True)

    command: Command
    model: Optional[Path] = None
    input: Optional[Path] = None
    out: Optional[Path] = None
    out_dir: Optional[Path] = None
    M: Optional[float] = None
    p: float = 0.0
    tau: float = 1.0
    theta: Optional[float] = None
    n_modes: int = Field(default=8, ge=1)
    restarts: Optional[int] = Field(default=None, ge=1)
    grid: Optional[GridSpec] = None
    tol: Optional[float] = Field(default=None, gt=0.0)
    seed: int = 0
    dominance_factor: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    zeta_threshold: Optional[float] = Field(default=None, gt=0.0)
    ratio_max: Optional[float] = Field(default=None, gt=0.0)
    values: Literal["modulus", "probability"] = "modulus"
    column: str = "value"
    gamma_max: Optional[float] = Field(default=None, gt=0.0)
    target_rmse: Optional[float] = Field(default=None, gt=0.0)
    clamp: bool = False
    grid_size: Optional[int] = Field(default=None, ge=2)
    truncation_mass: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def check_paths(self) -> "RunConfig":
        needs_model = ("transform", "window", "phi", "oracle-compare")
        if self.command == "fit" and not self.input:
            raise InputError("fit needs --input")
        if self.command in needs_model and not self.model:
            raise InputError(f"{self.command} needs --model")
        if self.command == "figures" and not self.out_dir:
            raise InputError("figures needs --out-dir")
        for name in ("model", "input", "out", "out_dir"):
            value = getattr(self, name)
            if value is not None and not str(value):
                raise InputError(f"--{name.replace('_', '-')} must be a nonempty path")
        if not (math.isfinite(self.p) and self.p >= 0.0):
            raise InputError(f"--p must be nonnegative, got {self.p}")
        return self

    def grid_or(self, default: GridSpec) -> GridSpec:
        return self.grid or default
