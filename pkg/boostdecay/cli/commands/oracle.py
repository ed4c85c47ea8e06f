"""
oracle-compare: closed-form P_p(t) against the quadrature oracle
"""

import csv
import logging
import math
from typing import List, Optional

from boostdecay.cli.dependencies import get_lab_context, get_quadrature_config, get_rest_model, get_zeta_bounds
from boostdecay.core.exceptions import BoostDecayError, InputError, PrecisionError
from boostdecay.models import IntervalSet, LabContext, LorentzianSum, RestModel, RunConfig
from boostdecay.services.labframe import survival_probability_lab
from boostdecay.services.oracle import integrate_amplitude
from boostdecay.services.windows import exponential_window
from boostdecay.utils.helpers import format_float, join_warnings, open_output, relative_difference

logger = logging.getLogger(__name__)


def _lab_window(model: RestModel, ctx: LabContext, config: RunConfig) -> Optional[IntervalSet]:
    if ctx.p == 0.0:
        return None
    return exponential_window(model, ctx, bounds=get_zeta_bounds(config), dominance_factor=config.dominance_factor).I_p


def _max_or_nan(values: List[float]) -> float:
    return max(values) if values else math.nan


def run(config: RunConfig) -> int:
    """
    One row per grid time: t, closed_form, oracle, rel_diff, quad_error, in_window, flag

    ``flag`` is ``ok``, ``off_regime`` (closed-form validity warnings) or
    ``precision`` (oracle did not converge; its estimate is still written).
    The trailing summary takes the maximum rel_diff over ``ok`` rows.
    """
    if config.grid is None:
        raise InputError("oracle-compare needs --grid")
    model = get_rest_model(config)
    ctx = get_lab_context(config, model.M)
    cfg = get_quadrature_config(config)
    mdd = LorentzianSum(modeset=model.modeset, M=model.M)
    window = _lab_window(model, ctx, config)
    times = config.grid.values()
    logger.info(f"Comparing against the oracle on {times.size} points: p={ctx.p:g} M={model.M:g}")

    ok_diffs: List[float] = []
    window_diffs: List[float] = []
    with open_output(config.out) as handle:
        handle.write(f"# gamma={format_float(ctx.gamma)}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["t", "closed_form", "oracle", "rel_diff", "quad_error", "in_window", "flag", "warnings"])
        for t in times:
            t = float(t)
            try:
                evaluation = survival_probability_lab(model, ctx, t)
            except BoostDecayError as e:
                logger.warning(f"Closed form failed at t={t:g}: {e.message}")
                writer.writerow([format_float(t), "nan", "nan", "nan", "nan", "", "off_regime", e.error_type])
                continue
            try:
                result = integrate_amplitude(mdd, ctx.p, t, cfg)
                oracle_value, quad_error, flag = abs(result.value) ** 2, result.error, "ok"
            except PrecisionError as e:
                oracle_value, quad_error, flag = abs(e.estimate) ** 2, e.error, "precision"
            if flag == "ok" and evaluation.warnings:
                flag = "off_regime"
            in_window = window is not None and window.contains(t)
            rel_diff = relative_difference(evaluation.value, oracle_value)
            if flag == "ok":
                ok_diffs.append(rel_diff)
                if in_window:
                    window_diffs.append(rel_diff)
            writer.writerow(
                [
                    format_float(t),
                    format_float(evaluation.value),
                    format_float(oracle_value),
                    format_float(rel_diff),
                    format_float(quad_error),
                    "1" if in_window else "0",
                    flag,
                    join_warnings(evaluation.warning_kinds),
                ]
            )
        handle.write(f"# max_rel_diff={format_float(_max_or_nan(ok_diffs))} rows={len(ok_diffs)}\n")
        handle.write(f"# max_rel_diff_in_window={format_float(_max_or_nan(window_diffs))} rows={len(window_diffs)}\n")
    logger.info(f"Max relative deviation over {len(ok_diffs)} valid rows: {_max_or_nan(ok_diffs):.3e}")
    return 0
