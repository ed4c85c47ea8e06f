"""
fit: Prony fit of a sampled survival curve
"""

import logging

from boostdecay.cli.dependencies import get_fit_config
from boostdecay.core.exceptions import FitError
from boostdecay.models import RunConfig
from boostdecay.services.io import read_curve_csv, write_modeset_json
from boostdecay.services.prony import fit_prony

logger = logging.getLogger(__name__)


def run(config: RunConfig) -> int:
    """
    Fit --modes exponential modes to --input and write the mode-set JSON

    On a failed fit the best model found so far is still written, with
    ``"status": "failed"``, before the error propagates.
    """
    curve = read_curve_csv(config.input, column=config.column, values=config.values)
    fit_config = get_fit_config(config)
    logger.info(f"Fitting {fit_config.n_modes} modes to {len(curve)} samples from {config.input}")
    try:
        modeset, report = fit_prony(curve, fit_config)
    except FitError as e:
        if e.best is not None:
            extra = {"status": "failed", "report": e.report.to_dict() if e.report is not None else None}
            write_modeset_json(config.out, e.best, config.M, extra)
        raise
    write_modeset_json(config.out, modeset, config.M, {"status": "ok", "report": report.to_dict()})
    return 0
