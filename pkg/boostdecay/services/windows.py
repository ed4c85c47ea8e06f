"""
Exponential-time windows

A mode j dominates the inverse-power-law part of the lab amplitude while
K(zeta_j) / xi_j stays large, zeta_j = Gamma_j t / (2 gamma). With
K(zeta) >= threshold on [zeta_min, zeta_max] and xi_j small, each dominant
mode contributes the window [2 zeta_min gamma/Gamma_j, 2 zeta_max gamma/Gamma_j].
"""

import logging
import math
from typing import List, Optional, Sequence

from scipy.optimize import brentq

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import (
    DomainError,
    ExcludedRegimeError,
    NoSolutionError,
    OutOfWindowError,
)
from boostdecay.models.frames import LabContext, ValidityWarning
from boostdecay.models.modes import RestModel
from boostdecay.models.windows import ConstraintMargins, IntervalSet, ModeWindow, WindowReport, ZetaBounds

logger = logging.getLogger(__name__)

K_MAX = math.sqrt(0.5) * math.exp(-0.5)


def k_function(zeta: float) -> float:
    """K(zeta) = sqrt(zeta) exp(-zeta), maximal at zeta = 1/2"""
    zeta = float(zeta)
    if math.isnan(zeta) or zeta < 0.0:
        raise DomainError(f"K is defined for zeta >= 0, got {zeta}")
    if math.isinf(zeta):
        return 0.0
    return math.sqrt(zeta) * math.exp(-zeta)


def solve_zeta_bounds(threshold: Optional[float] = None, xtol: Optional[float] = None) -> ZetaBounds:
    """
    Solve K(zeta) = threshold on both sides of the maximum

    Args:
        threshold: Level in (0, K(1/2)), settings default 1e-2
        xtol: Absolute root tolerance, settings default 1e-10

    Raises:
        NoSolutionError: threshold >= K(1/2)
    """
    settings = get_settings()
    threshold = settings.zeta_threshold if threshold is None else float(threshold)
    xtol = settings.zeta_xtol if xtol is None else xtol
    if not (math.isfinite(threshold) and threshold > 0.0):
        raise DomainError(f"threshold must be positive, got {threshold}")
    if threshold >= K_MAX:
        raise NoSolutionError(
            f"K(zeta) = {threshold} has no solution, max K = {K_MAX:.6f}",
            details={"threshold": threshold, "k_max": K_MAX},
        )

    def excess(zeta: float) -> float:
        return k_function(zeta) - threshold

    zeta_min = brentq(excess, 0.0, 0.5, xtol=xtol)
    upper = 1.0
    while excess(upper) > 0.0:
        upper *= 2.0
    zeta_max = brentq(excess, 0.5, upper, xtol=xtol)
    # guard the strict ordering for thresholds next to the maximum
    zeta_min = min(zeta_min, math.nextafter(0.5, 0.0))
    zeta_max = max(zeta_max, math.nextafter(0.5, 1.0))
    return ZetaBounds(zeta_min=zeta_min, zeta_max=zeta_max, threshold=threshold)


def xi_parameters(model: RestModel, ctx: LabContext) -> List[float]:
    """
    xi_j = (sum_i w_i Gamma_i / w_j) / (2M) sqrt((Gamma_j / (pi M)) sqrt(1 - 1/gamma^2))

    Raises:
        ExcludedRegimeError: gamma = 1 (p = 0)
    """
    if ctx.p <= 0.0 or ctx.gamma <= 1.0:
        raise ExcludedRegimeError("The nonrelativistic limit gamma -> 1 is excluded", details={"p": ctx.p})
    beta = ctx.beta_gamma / ctx.gamma  # sqrt(1 - 1/gamma^2)
    mean_width = model.modeset.mean_width
    return [
        (mean_width / mode.w) / (2.0 * model.M) * math.sqrt(mode.gamma / (math.pi * model.M) * beta)
        for mode in model.modeset.modes
    ]


def _dominance_limit(dominance_factor: Optional[float]) -> float:
    settings = get_settings()
    factor = settings.dominance_factor if dominance_factor is None else float(dominance_factor)
    if not 0.0 < factor < 1.0:
        raise DomainError(f"dominance_factor must lie in (0, 1), got {factor}")
    return factor * settings.xi_reference


def dominant_indices(xi: Sequence[float], dominance_factor: Optional[float] = None) -> List[int]:
    """1-based indices j with xi_j <= dominance_factor * 1e-2"""
    limit = _dominance_limit(dominance_factor)
    return [j for j, value in enumerate(xi, start=1) if value <= limit]


def dominance_ratio(model: RestModel, ctx: LabContext, j: int, t: float) -> float:
    """
    Mode term w_j exp(-Gamma_j t/(2 gamma)) over the inverse-power bound
    (p sum w Gamma / (pi M^2)) sqrt(pi / (2 p t)); equals K(zeta_j)/xi_j
    """
    if not 1 <= j <= model.modeset.n:
        raise DomainError(f"Mode index {j} out of range 1..{model.modeset.n}")
    if ctx.p <= 0.0 or t <= 0.0:
        raise ExcludedRegimeError("Dominance ratio needs p > 0 and t > 0")
    mode = model.modeset.modes[j - 1]
    term = mode.w * math.exp(-0.5 * mode.gamma * t / ctx.gamma)
    bound = ctx.p * model.modeset.mean_width / (math.pi * model.M**2) * math.sqrt(math.pi / (2.0 * ctx.p * t))
    return term / bound


def validity_lower_bound(model: RestModel, ctx: LabContext, validity_factor: Optional[float] = None) -> float:
    """Earliest t with pt >= factor and (t > 1/(10 Gamma_1) or Mt >= factor)"""
    factor = get_settings().validity_factor if validity_factor is None else validity_factor
    early = min(1.0 / (10.0 * model.modeset.modes[0].gamma), factor / model.M)
    if ctx.p <= 0.0:
        return early
    return max(early, factor / ctx.p)


def exponential_window(
    model: RestModel,
    ctx: LabContext,
    bounds: Optional[ZetaBounds] = None,
    dominance_factor: Optional[float] = None,
    validity_factor: Optional[float] = None,
) -> WindowReport:
    """
    Estimate the exponential times I_p and their rest-frame twin I_0

    Args:
        model: Rest-frame model (non-strict models are reported with a warning)
        ctx: Momentum context, p > 0
        bounds: Zeta bounds (solved for the settings threshold if omitted)
        dominance_factor: xi_j <= dominance_factor * 1e-2 selects a mode
        validity_factor: Operational ">>" factor for the margins

    Returns:
        WindowReport; an empty dominant set yields empty intervals
    """
    settings = get_settings()
    bounds = bounds or solve_zeta_bounds()
    factor = settings.validity_factor if validity_factor is None else validity_factor
    xi = xi_parameters(model, ctx)
    limit = _dominance_limit(dominance_factor)
    indices = dominant_indices(xi, dominance_factor)
    gamma = ctx.gamma

    warnings: List[ValidityWarning] = []
    if not model.is_small:
        warnings.append(
            ValidityWarning(
                kind="width_ratio",
                message=f"Gamma_N/M = {model.ratio:.3e} exceeds ratio_max = {model.ratio_max:.3e}",
                margin=model.ratio,
                required=model.ratio_max,
            )
        )

    modes: List[ModeWindow] = []
    for j in indices:
        mode = model.modeset.modes[j - 1]
        rest = (2.0 * bounds.zeta_min / mode.gamma, 2.0 * bounds.zeta_max / mode.gamma)
        modes.append(
            ModeWindow(
                j=j,
                w=mode.w,
                gamma=mode.gamma,
                xi=xi[j - 1],
                rest=rest,
                lab=(rest[0] * gamma, rest[1] * gamma),
            )
        )
    i_0 = IntervalSet(intervals=[m.rest for m in modes])
    i_p = i_0.scaled(gamma)

    margins: Optional[ConstraintMargins] = None
    smallest: Optional[float] = None
    admitting: Optional[float] = None
    if i_p.is_empty:
        smallest = min(xi)
        admitting = smallest / settings.xi_reference
        warnings.append(
            ValidityWarning(
                kind="empty_window",
                message=(
                    f"No mode satisfies xi_j <= {limit:.3e}; smallest xi = {smallest:.3e} "
                    f"needs dominance_factor >= {admitting:.3e}"
                ),
                margin=smallest,
                required=limit,
            )
        )
        logger.info(f"Empty exponential window: smallest xi = {smallest:.3e}")
    else:
        t_left = i_p.lower
        margins = ConstraintMargins(
            t=t_left,
            pt=ctx.p * t_left,
            t_gamma1=10.0 * model.modeset.modes[0].gamma * t_left,
            Mt=model.M * t_left,
        )
        warnings.extend(margins.failing(factor))

    return WindowReport(
        gamma=gamma,
        zeta=bounds,
        dominance_factor=limit / settings.xi_reference,
        xi_limit=limit,
        xi=xi,
        dominant_indices=indices,
        modes=modes,
        I_p=i_p,
        I_0=i_0,
        closed_interval=i_p.is_closed_interval,
        constraint_margins=margins,
        warnings=warnings,
        smallest_failing_xi=smallest,
        admitting_dominance_factor=admitting,
    )


def closed_interval_criterion(report: WindowReport) -> bool:
    """Gamma_{j_l} / Gamma_{j_l+1} > zeta_min / zeta_max for every consecutive dominant pair"""
    if report.is_empty:
        return False
    widths = [m.gamma for m in report.modes]
    return all(a / b > report.zeta.ratio for a, b in zip(widths, widths[1:]))


def dominant_mode_decay(model: RestModel, ctx: LabContext, report: WindowReport, t: float) -> float:
    """
    |sum'_l w_{j_l} exp(-Gamma_{j_l} t / (2 gamma))|^2 over modes whose window holds t

    Raises:
        OutOfWindowError: t outside I_p
    """
    if abs(report.gamma - ctx.gamma) > 1e-12 * ctx.gamma:
        raise DomainError("Window report was computed for a different momentum")
    if len(report.xi) != model.modeset.n:
        raise DomainError("Window report was computed for a different model")
    if not report.I_p.contains(t):
        raise OutOfWindowError(f"t = {t} is outside the exponential window", details={"t": t})
    total = math.fsum(
        m.w * math.exp(-0.5 * m.gamma * t / report.gamma)
        for m in report.modes
        if m.lab[0] <= t <= m.lab[1]
    )
    return total * total


def rest_dominant_mode_decay(model: RestModel, report: WindowReport, t: float) -> float:
    """Rest-frame twin of dominant_mode_decay over I_0"""
    if not report.I_0.contains(t):
        raise OutOfWindowError(f"t = {t} is outside the rest-frame window", details={"t": t})
    total = math.fsum(
        m.w * math.exp(-0.5 * m.gamma * t) for m in report.modes if m.rest[0] <= t <= m.rest[1]
    )
    return total * total
