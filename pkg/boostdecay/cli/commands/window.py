"""
window: exponential-time window report
"""

import json
import logging

from boostdecay.cli.dependencies import get_lab_context, get_rest_model, get_zeta_bounds
from boostdecay.models import RunConfig
from boostdecay.services.timemap import window_lengths
from boostdecay.services.windows import closed_interval_criterion, exponential_window
from boostdecay.utils.helpers import open_output

logger = logging.getLogger(__name__)


def run(config: RunConfig) -> int:
    """Write the WindowReport as JSON; an empty window still exits 0"""
    model = get_rest_model(config, strict=False)
    ctx = get_lab_context(config, model.M)
    report = exponential_window(
        model,
        ctx,
        bounds=get_zeta_bounds(config),
        dominance_factor=config.dominance_factor,
    )
    document = report.model_dump(mode="json")
    document["closed_interval_criterion"] = closed_interval_criterion(report)
    if not report.is_empty:
        t_0, t_p = window_lengths(report)
        document["lengths"] = {"T_0": t_0, "T_p": t_p, "ratio": t_p / t_0}
    for warning in report.warnings:
        logger.warning(f"window: {warning.message}")

    with open_output(config.out) as handle:
        json.dump(document, handle, indent=2)
        handle.write("\n")
    return 0
