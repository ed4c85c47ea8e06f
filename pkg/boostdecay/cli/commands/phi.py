"""
phi: time map phi_p(t) against t/gamma, with the linearity diagnostic
"""

import csv
import json
import logging
import math
from typing import Any, Dict, Optional

from boostdecay.cli.dependencies import get_lab_context, get_rest_model, get_zeta_bounds
from boostdecay.core.exceptions import BoostDecayError
from boostdecay.models import GridSpec, LabContext, RestModel, RunConfig
from boostdecay.services.timemap import linearity_diagnostic, phi_p
from boostdecay.services.windows import exponential_window, validity_lower_bound
from boostdecay.utils.helpers import format_float, join_warnings, open_output

logger = logging.getLogger(__name__)


def default_grid(tau: float) -> GridSpec:
    """10 <= t/tau <= 700"""
    return GridSpec(t_min=10.0 * tau, t_max=700.0 * tau, points=200)


def linearity_summary(
    model: RestModel,
    ctx: LabContext,
    config: RunConfig,
    t_ceiling: Optional[float] = None,
) -> Dict[str, Any]:
    """Linearity of phi_p over I_p from the validity bound on, or why it is unavailable"""
    if ctx.p == 0.0:
        return {"available": False, "reason": "p = 0 has no lab window"}
    try:
        report = exponential_window(
            model,
            ctx,
            bounds=get_zeta_bounds(config),
            dominance_factor=config.dominance_factor,
        )
        diagnostic = linearity_diagnostic(
            model,
            ctx,
            report.I_p,
            grid_size=config.grid_size,
            t_floor=validity_lower_bound(model, ctx),
            t_ceiling=t_ceiling,
        )
    except BoostDecayError as e:
        return {"available": False, "reason": e.message}
    summary = diagnostic.to_dict()
    for key in ("grid", "phi", "deviations"):
        summary.pop(key)
    summary["available"] = True
    return summary


def run(config: RunConfig) -> int:
    model = get_rest_model(config)
    ctx = get_lab_context(config, model.M)
    gamma = ctx.gamma
    times = config.grid_or(default_grid(config.tau)).values()
    logger.info(f"phi_p on {times.size} points: p={ctx.p:g} M={model.M:g} gamma={gamma:.6g}")

    failed = 0
    worst = 0.0
    with open_output(config.out) as handle:
        handle.write(f"# gamma={format_float(gamma)}\n")
        handle.write(f"# p={format_float(ctx.p)} M={format_float(model.M)} N={model.modeset.n}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "phi", "t_over_gamma", "deviation", "warnings"])
        for t in times:
            t = float(t)
            try:
                evaluation = phi_p(model, ctx, t)
                phi = evaluation.phi
                deviation = abs(phi * gamma / t - 1.0) if t > 0.0 else abs(phi)
                kinds = [w.kind for w in evaluation.warnings]
                worst = max(worst, deviation)
            except BoostDecayError as e:
                logger.warning(f"phi_p({t:g}) failed: {e.message}")
                phi, deviation, kinds = math.nan, math.nan, ["failed", e.error_type]
                failed += 1
            writer.writerow(
                [format_float(t), format_float(phi), format_float(t / gamma), format_float(deviation), join_warnings(kinds)]
            )
        summary = linearity_summary(model, ctx, config)
        summary["grid_max_deviation"] = worst
        summary["failed_rows"] = failed
        handle.write(f"# linearity {json.dumps(summary, sort_keys=True)}\n")
    return 0
