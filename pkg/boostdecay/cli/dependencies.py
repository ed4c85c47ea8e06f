"""
Builders shared by the CLI commands
"""

import logging
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

from pydantic import BaseModel, ValidationError

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import InputError
from boostdecay.models import (
    ExpModeSet,
    FitConfig,
    LabContext,
    QuadratureConfig,
    RestModel,
    RunConfig,
    ZetaBounds,
)
from boostdecay.services.io import read_modeset_json
from boostdecay.services.windows import solve_zeta_bounds

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def build(cls: Type[ModelT], **values: Any) -> ModelT:
    """Construct a pydantic model, reporting field errors as InputError"""
    try:
        return cls(**values)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise InputError(f"Invalid {cls.__name__}: {problems}", error_code="validation_error") from e


def get_modeset(config: RunConfig) -> Tuple[ExpModeSet, Optional[float]]:
    if config.model is None:
        raise InputError(f"{config.command} needs --model")
    return read_modeset_json(config.model)


def get_rest_model(config: RunConfig, strict: bool = True) -> RestModel:
    """
    Rest model from --model, with --M overriding the file's mass

    Raises:
        InputError: neither the file nor the flags give M
    """
    modeset, file_mass = get_modeset(config)
    M = config.M if config.M is not None else file_mass
    if M is None:
        raise InputError("The model has no mass M; pass --M or add \"M\" to the JSON", error_code="missing_mass")
    ratio_max = config.ratio_max if config.ratio_max is not None else get_settings().ratio_max
    return build(RestModel, modeset=modeset, M=M, ratio_max=ratio_max, strict=strict)


def get_lab_context(config: RunConfig, M: float) -> LabContext:
    return build(LabContext, p=config.p, M=M)


def get_fit_config(config: RunConfig) -> FitConfig:
    settings = get_settings()
    values: Dict[str, Any] = {
        "n_modes": config.n_modes,
        "restarts": config.restarts or settings.fit_restarts,
        "seed": config.seed,
        "tolerance": config.tol or settings.fit_tolerance,
        "target_rmse": config.target_rmse,
    }
    if config.gamma_max is not None:
        values["gamma_bounds"] = (config.gamma_max * 1e-6, config.gamma_max)
    return build(FitConfig, **values)


def get_quadrature_config(config: RunConfig) -> QuadratureConfig:
    values: Dict[str, Any] = {"truncation_mass": config.truncation_mass}
    if config.tol is not None:
        values["rel_tol"] = config.tol
    return build(QuadratureConfig, **values)


@lru_cache()
def _zeta_bounds(threshold: float) -> ZetaBounds:
    return solve_zeta_bounds(threshold)


def get_zeta_bounds(config: RunConfig) -> ZetaBounds:
    threshold = config.zeta_threshold if config.zeta_threshold is not None else get_settings().zeta_threshold
    return _zeta_bounds(threshold)
