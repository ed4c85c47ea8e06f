"""
figures: data for the transformed-decay and time-map figure regimes

Fits the stretched exponentials exp(-(t/tau)^theta / 2) with theta = 3/5 and
1/2 on 0.5 <= t/tau <= 200, then writes P_p over 3 <= t/tau <= 20 and phi_p
over the time-map ranges for each caption's (p tau, M tau). The index records
the phi_p linearity inside I_p and the boosted fit domain. Quantities are in
units of tau.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from boostdecay.cli.commands import phi as phi_command
from boostdecay.cli.commands import transform as transform_command
from boostdecay.cli.dependencies import build
from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import InputError
from boostdecay.models import ExpModeSet, FitConfig, GridSpec, LabContext, RestModel, RunConfig
from boostdecay.services.io import write_modeset_json
from boostdecay.services.prony import fit_prony, stretched_exponential_curve
from boostdecay.utils.helpers import geometric_grid, open_output

logger = logging.getLogger(__name__)

# Geometric sample grid over t/tau and width bounds in units of 1/tau
FIT_GRID = (0.5, 200.0, 400)
FIT_GAMMA_BOUNDS = (1e-5, 3.5)
FIT_TARGET_RMSE = 1e-3


class Caption(NamedTuple):
    figure: int
    kind: str  # transform | phi
    theta: float
    p: float
    M: float
    gamma: float
    t_range: Tuple[float, float]


_TRANSFORM_RANGE = (3.0, 20.0)

CAPTIONS: List[Caption] = [
    *(
        Caption(1, "transform", 0.6, p, M, g, _TRANSFORM_RANGE)
        for p, M, g in [
            (2000.0, 700.0, 3.0271),
            (1500.0, 600.0, 2.6926),
            (1100.0, 600.0, 2.0883),
            (900.0, 700.0, 1.6288),
            (600.0, 600.0, math.sqrt(2.0)),
        ]
    ),
    *(
        Caption(2, "transform", 0.5, p, M, g, _TRANSFORM_RANGE)
        for p, M, g in [
            (2000.0, 600.0, 3.4801),
            (1800.0, 600.0, math.sqrt(10.0)),
            (1700.0, 800.0, 2.3485),
            (1000.0, 800.0, 1.601),
            (700.0, 700.0, math.sqrt(2.0)),
        ]
    ),
    *(
        Caption(3, "phi", 0.6, p, M, g, (10.0, 700.0))
        for p, M, g in [
            (700.0, 700.0, math.sqrt(2.0)),
            (1200.0, 1000.0, 1.5620),
            (700.0, 400.0, 2.0156),
            (1000.0, 500.0, math.sqrt(5.0)),
        ]
    ),
    *(
        Caption(4, "phi", 0.5, p, M, g, (10.0, 1300.0))
        for p, M, g in [
            (600.0, 600.0, math.sqrt(2.0)),
            (600.0, 400.0, 1.8028),
            (800.0, 500.0, 1.8868),
            (800.0, 400.0, 2.2361),
        ]
    ),
]


def fit_stretched(
    theta: float,
    tau: float = 1.0,
    n_modes: int = 8,
    restarts: Optional[int] = None,
    seed: int = 0,
    target_rmse: float = FIT_TARGET_RMSE,
) -> Tuple[ExpModeSet, Dict[str, Any]]:
    """
    Seeded N-mode fit of exp(-(t/tau)^theta / 2) on the figure sample grid

    Raises:
        FitError: the best restart misses target_rmse
    """
    lo, hi, n = FIT_GRID
    curve = stretched_exponential_curve(tau, theta, geometric_grid(lo * tau, hi * tau, n))
    fit_config = build(
        FitConfig,
        n_modes=n_modes,
        restarts=restarts or get_settings().fit_restarts,
        seed=seed,
        target_rmse=target_rmse,
        gamma_bounds=(FIT_GAMMA_BOUNDS[0] / tau, FIT_GAMMA_BOUNDS[1] / tau),
    )
    modeset, report = fit_prony(curve, fit_config)
    return modeset, report.to_dict()


def _file_name(caption: Caption) -> str:
    return f"fig{caption.figure}_{caption.kind}_p{caption.p:g}_M{caption.M:g}.csv"


def run(config: RunConfig) -> int:
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tau = config.tau

    captions = [c for c in CAPTIONS if config.theta is None or math.isclose(c.theta, config.theta)]
    if not captions:
        raise InputError(f"No figure uses theta = {config.theta}; choose 0.6 or 0.5")

    fit_files: Dict[float, Path] = {}
    modesets: Dict[float, ExpModeSet] = {}
    fit_domain = (FIT_GRID[0] * tau, FIT_GRID[1] * tau)
    index: Dict[str, Any] = {"tau": tau, "fit_domain": list(fit_domain), "fits": [], "figures": []}
    for theta in sorted({c.theta for c in captions}, reverse=True):
        logger.info(f"Fitting theta={theta:g} with {config.n_modes} modes")
        modeset, report = fit_stretched(
            theta,
            tau,
            n_modes=config.n_modes,
            restarts=config.restarts,
            seed=config.seed,
            target_rmse=config.target_rmse or FIT_TARGET_RMSE,
        )
        modesets[theta] = modeset
        name = f"modes_theta_{theta:g}.json"
        fit_files[theta] = out_dir / name
        write_modeset_json(fit_files[theta], modeset, None, {"theta": theta, "report": report})
        index["fits"].append({"theta": theta, "file": name, "rmse": report["rmse"]})

    for caption in captions:
        M, p = caption.M / tau, caption.p / tau
        t_min, t_max = caption.t_range
        grid = GridSpec(t_min=t_min * tau, t_max=t_max * tau, points=171 if caption.kind == "transform" else 200)
        name = _file_name(caption)
        command = transform_command if caption.kind == "transform" else phi_command
        # --M overrides the mass-free fit file
        command.run(
            config.model_copy(
                update={
                    "command": caption.kind,
                    "model": fit_files[caption.theta],
                    "M": M,
                    "p": p,
                    "grid": grid,
                    "out": out_dir / name,
                }
            )
        )
        ctx = LabContext(p=p, M=M)
        gamma = ctx.gamma
        entry: Dict[str, Any] = {
            "figure": caption.figure,
            "kind": caption.kind,
            "theta": caption.theta,
            "p_tau": caption.p,
            "M_tau": caption.M,
            "gamma": gamma,
            "caption_gamma": caption.gamma,
            "file": name,
        }
        if caption.kind == "phi":
            # past gamma * fit_domain the fitted model is extrapolated
            model = RestModel(modeset=modesets[caption.theta], M=M)
            entry["linearity"] = phi_command.linearity_summary(model, ctx, config, t_ceiling=gamma * fit_domain[1])
        index["figures"].append(entry)
        logger.info(f"Wrote {name} (gamma={gamma:.5g})")

    with open_output(out_dir / "index.json") as handle:
        json.dump(index, handle, indent=2)
        handle.write("\n")
    return 0

