"""
Time transformation phi_p(t) = P0^-1(P_p(t))

P0^-1(r) = -(2/Gamma_1) ln u(r), where u in (0, 1] solves
sum_j w_j u^(Gamma_j/Gamma_1) = sqrt(r).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import DiagnosticUnavailableError, DomainError, InfiniteTimeError
from boostdecay.models.frames import LabContext, ValidityWarning
from boostdecay.models.modes import ExpModeSet, RestModel
from boostdecay.models.windows import IntervalSet, WindowReport
from boostdecay.services.labframe import survival_probability_lab
from boostdecay.services.prony import survival_probability_rest

logger = logging.getLogger(__name__)

_MAX_ITERATIONS = 200


@dataclass(frozen=True)
class InverseRoot:
    """Root u* of sum_j w_j u^(Gamma_j/Gamma_1) = sqrt(r)"""

    u: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class PhiEvaluation:
    t: float
    phi: float
    p_lab: float
    warnings: Tuple[ValidityWarning, ...] = ()
    clamped_input: bool = False

    def __float__(self) -> float:
        return self.phi


@dataclass(frozen=True)
class LinearityReport:
    """Deviation of phi_p(t) from t/gamma over a window"""

    gamma: float
    times: List[float]
    phi: List[float]
    deviations: List[float]
    max_deviation: float
    mean_deviation: float
    slope: float
    slope_deviation: float
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma": self.gamma,
            "max_deviation": self.max_deviation,
            "mean_deviation": self.mean_deviation,
            "slope": self.slope,
            "expected_slope": 1.0 / self.gamma,
            "slope_deviation": self.slope_deviation,
            "grid": self.times,
            "phi": self.phi,
            "deviations": self.deviations,
            "warnings": self.warnings,
        }


def _powers(u: float, exponents: np.ndarray) -> np.ndarray:
    # u^e as exp(e ln u); u = 0 maps to 0 for every e >= 1
    if u <= 0.0:
        return np.zeros_like(exponents)
    return np.exp(exponents * math.log(u))


def inverse_root(model: ExpModeSet, r: float) -> InverseRoot:
    """
    Solve sum_j w_j u^(Gamma_j/Gamma_1) = sqrt(r) for u in (0, 1]

    Bisection on (0, 1] until the bracket is narrower than the settings'
    switch width, then safeguarded Newton.
    """
    r = float(r)
    if math.isnan(r) or r < 0.0 or r > 1.0:
        raise DomainError(f"P0^-1 is defined on (0, 1], got r = {r}")
    if r == 0.0:
        raise InfiniteTimeError()
    settings = get_settings()
    target = math.sqrt(r)
    weights = model.weights
    exponents = model.widths / model.widths[0]

    def residual(u: float) -> float:
        return float(np.dot(weights, _powers(u, exponents))) - target

    if r == 1.0:
        return InverseRoot(u=1.0, residual=abs(residual(1.0)), iterations=0)

    lo, hi = 0.0, 1.0
    iterations = 0
    while hi - lo > settings.newton_switch_width:
        mid = 0.5 * (lo + hi)
        if residual(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        iterations += 1

    u = 0.5 * (lo + hi)
    for _ in range(_MAX_ITERATIONS):
        iterations += 1
        f = residual(u)
        if f == 0.0:
            break
        if f > 0.0:
            hi = u
        else:
            lo = u
        slope = float(np.dot(weights * exponents, _powers(u, exponents - 1.0)))
        step = f / slope if slope > 0.0 else math.inf
        candidate = u - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if abs(candidate - u) <= 4.0 * np.finfo(float).eps * max(u, np.finfo(float).tiny):
            u = candidate
            break
        u = candidate
    else:
        logger.warning(f"P0^-1({r}) stopped after {_MAX_ITERATIONS} Newton steps")

    return InverseRoot(u=u, residual=abs(residual(u)), iterations=iterations)


def p0_inverse(model: ExpModeSet, r: float) -> float:
    """
    Time t >= 0 at which the rest-frame survival probability equals r

    Raises:
        DomainError: r outside (0, 1]
        InfiniteTimeError: r = 0
    """
    root = inverse_root(model, r)
    if root.u >= 1.0:
        return 0.0
    return -2.0 / model.modes[0].gamma * math.log(root.u)


def phi_p(model: RestModel, ctx: LabContext, t: float) -> PhiEvaluation:
    """
    phi_p(t) = P0^-1(P_p(t)) with P_p from the closed form

    A closed-form value above 1 gives phi = 0 with an ``overshoot`` warning.

    Raises:
        DomainError: P_p(t) <= 0
    """
    evaluation = survival_probability_lab(model, ctx, t)
    warnings = list(evaluation.warnings)
    if evaluation.value > 1.0:
        warnings.append(
            ValidityWarning(
                kind="overshoot",
                message=f"P_p({t:.6g}) = {evaluation.value:.12g} exceeds 1",
                margin=evaluation.value,
                required=1.0,
            )
        )
        return PhiEvaluation(t=t, phi=0.0, p_lab=evaluation.value, warnings=tuple(warnings), clamped_input=True)
    if evaluation.value <= 0.0:
        raise DomainError(f"P_p({t}) = {evaluation.value} is not a probability in (0, 1]")
    return PhiEvaluation(
        t=t,
        phi=p0_inverse(model.modeset, evaluation.value),
        p_lab=evaluation.value,
        warnings=tuple(warnings),
    )


def phi_p_grid(model: RestModel, ctx: LabContext, times: Sequence[float]) -> List[PhiEvaluation]:
    return [phi_p(model, ctx, float(t)) for t in times]


def _window_grid(window: IntervalSet, grid_size: int) -> np.ndarray:
    grid = np.geomspace(window.lower, window.upper, grid_size)
    return np.array([t for t in grid if window.contains(t)])


def linearity_diagnostic(
    model: RestModel,
    ctx: LabContext,
    window: IntervalSet,
    grid_size: Optional[int] = None,
    t_floor: Optional[float] = None,
    t_ceiling: Optional[float] = None,
) -> LinearityReport:
    """
    max and mean of |phi_p(t) gamma / t - 1| on a geometric grid in the window

    Args:
        model: Rest-frame model
        ctx: Momentum context
        window: Time set to sample (normally I_p)
        grid_size: Number of grid points (settings default)
        t_floor: Restrict the window to t >= t_floor
        t_ceiling: Restrict the window to t <= t_ceiling

    Raises:
        DiagnosticUnavailableError: empty window
    """
    if window.is_empty:
        raise DiagnosticUnavailableError("Linearity diagnostic needs a nonempty window")
    if t_floor is not None or t_ceiling is not None:
        floor = 0.0 if t_floor is None else t_floor
        ceiling = math.inf if t_ceiling is None else t_ceiling
        window = window.clipped(floor, ceiling)
        if window.is_empty:
            raise DiagnosticUnavailableError(f"Window has no times in [{floor}, {ceiling}]")
    grid_size = grid_size or get_settings().linearity_grid_size
    times = _window_grid(window, grid_size)
    if times.size < 2:
        raise DiagnosticUnavailableError("Window too narrow for a linearity grid")

    gamma = ctx.gamma
    evaluations = phi_p_grid(model, ctx, times)
    phi = np.array([e.phi for e in evaluations])
    deviations = np.abs(phi * gamma / times - 1.0)
    slope = float(np.polyfit(times, phi, 1)[0])
    kinds = sorted({w.kind for e in evaluations for w in e.warnings})

    report = LinearityReport(
        gamma=gamma,
        times=times.tolist(),
        phi=phi.tolist(),
        deviations=deviations.tolist(),
        max_deviation=float(np.max(deviations)),
        mean_deviation=float(np.mean(deviations)),
        slope=slope,
        slope_deviation=abs(slope * gamma - 1.0),
        warnings=kinds,
    )
    logger.debug(f"Linearity over {times.size} points: max={report.max_deviation:.3e} slope={slope:.6g}")
    return report


def scaling_law_deviation(model: RestModel, ctx: LabContext, times: Sequence[float]) -> float:
    """max_t |P_p(t) - P0(t/gamma)| / P0(t/gamma)"""
    gamma = ctx.gamma
    worst = 0.0
    for t in times:
        rest = survival_probability_rest(model.modeset, float(t) / gamma)
        lab = survival_probability_lab(model, ctx, float(t)).value
        worst = max(worst, abs(lab - rest) / rest)
    return worst


def window_lengths(report: WindowReport) -> Tuple[float, float]:
    """(T_0, T_p), total lengths of the rest and lab windows"""
    return report.I_0.measure, report.I_p.measure
