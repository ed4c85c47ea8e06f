"""
transform: closed-form P_p(t) next to P_0(t) on a time grid
"""

import csv
import logging
import math

from boostdecay.cli.dependencies import get_lab_context, get_rest_model
from boostdecay.core.exceptions import SingularityError
from boostdecay.models import GridSpec, RunConfig
from boostdecay.services.labframe import survival_probability_lab
from boostdecay.services.prony import survival_probability_rest
from boostdecay.utils.helpers import format_float, join_warnings, open_output

logger = logging.getLogger(__name__)


def default_grid(tau: float) -> GridSpec:
    """3 <= t/tau <= 20"""
    return GridSpec(t_min=3.0 * tau, t_max=20.0 * tau, points=171)


def run(config: RunConfig) -> int:
    model = get_rest_model(config)
    ctx = get_lab_context(config, model.M)
    times = config.grid_or(default_grid(config.tau)).values()
    logger.info(f"Transforming on {times.size} points: p={ctx.p:g} M={model.M:g} gamma={ctx.gamma:.6g}")

    with open_output(config.out) as handle:
        handle.write(f"# gamma={format_float(ctx.gamma)}\n")
        handle.write(f"# p={format_float(ctx.p)} M={format_float(model.M)} N={model.modeset.n}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "P_p", "P_0", "gamma", "warnings"])
        for t in times:
            t = float(t)
            rest = survival_probability_rest(model.modeset, t)
            try:
                evaluation = survival_probability_lab(model, ctx, t, clamp=config.clamp)
                value, kinds = evaluation.value, evaluation.warning_kinds
                if evaluation.clamped:
                    kinds = kinds + ["clamped"]
            except SingularityError:
                value, kinds = math.nan, ["singularity"]
            writer.writerow(
                [format_float(t), format_float(value), format_float(rest), format_float(ctx.gamma), join_warnings(kinds)]
            )
    return 0
