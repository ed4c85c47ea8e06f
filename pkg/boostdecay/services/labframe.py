"""
Closed-form decay laws in the laboratory frame

A rest-frame superposition sum_j w_j exp(-Gamma_j t / 2) of the modulus,
observed with linear momentum p, survives with probability

    |sum_j w_j exp(-Upsilon(M, Gamma_j, p) t / 2) + i p sum_j w_j Gamma_j / (pi M^2) Xi(M, p, t)|^2

This module evaluates that form and its ingredients, the truncated
Breit-Wigner amplitude with its kappa-corrected asymptotics, and the
long-time power-law tail.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import DomainError, SingularityError
from boostdecay.models.frames import ComplexRate, LabContext, TailSpec, ValidityWarning
from boostdecay.models.modes import ExpModeSet, RestModel
from boostdecay.services import specfun

logger = logging.getLogger(__name__)


class LambdaPair(NamedTuple):
    lambda_minus: float
    lambda_plus: float


@dataclass(frozen=True)
class LabEvaluation:
    """Lab-frame survival probability at one time, with regime warnings"""

    t: float
    value: float
    amplitude: complex
    warnings: Tuple[ValidityWarning, ...] = ()
    clamped: bool = False

    def __float__(self) -> float:
        return self.value

    @property
    def warning_kinds(self) -> List[str]:
        return [w.kind for w in self.warnings]


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


def _check_nonnegative(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value >= 0.0):
        raise DomainError(f"{name} must be nonnegative and finite, got {value}")
    return value


def lorentz_gamma(M: float, p: float) -> float:
    """gamma = sqrt(1 + p^2/M^2)"""
    M = _check_positive("M", M)
    p = _check_nonnegative("p", p)
    return math.hypot(1.0, p / M)


def chi_p(mu0: float, p: float) -> float:
    """Long-time scaling factor sqrt(1 + p^2/mu0^2)"""
    return lorentz_gamma(mu0, p)


def lambda_mp(M: float, Gamma: float, p: float) -> LambdaPair:
    """
    Lambda_-/+ = sqrt(2 (R -/+ A)), A = M^2 - Gamma^2/4 + p^2, R = |A + i M Gamma|

    The smaller root is taken from the product Lambda_- Lambda_+ = 2 M Gamma
    to avoid the cancellation in R - A.
    """
    M = _check_positive("M", M)
    Gamma = _check_positive("Gamma", Gamma)
    p = _check_nonnegative("p", p)
    a = M * M - 0.25 * Gamma * Gamma + p * p
    b = M * Gamma
    r = math.hypot(a, b)
    if a >= 0.0:
        plus = math.sqrt(2.0 * (r + a))
        minus = math.sqrt(2.0) * b / math.sqrt(r + a)
    else:
        minus = math.sqrt(2.0 * (r - a))
        plus = math.sqrt(2.0) * b / math.sqrt(r - a)
    return LambdaPair(minus, plus)


def upsilon(M: float, Gamma: float, p: float) -> ComplexRate:
    """Upsilon = Lambda_- + i Lambda_+"""
    minus, plus = lambda_mp(M, Gamma, p)
    return ComplexRate(re=minus, im=plus)


def gamma_p_exact(M: float, Gamma: float, p: float) -> float:
    """Transformed decay width 2 |Im sqrt((M - i Gamma/2)^2 + p^2)|"""
    M = _check_positive("M", M)
    Gamma = _check_positive("Gamma", Gamma)
    p = _check_nonnegative("p", p)
    root = cmath.sqrt(complex(M, -0.5 * Gamma) ** 2 + p * p)
    return 2.0 * abs(root.imag)


def bw_kappa(M: float, Gamma: float, p: float) -> float:
    """kappa = Gamma^2 (gamma^2 - 1) / (8 M^2 gamma^4)"""
    M = _check_positive("M", M)
    Gamma = _check_positive("Gamma", Gamma)
    gamma = lorentz_gamma(M, p)
    beta_gamma_sq = (p / M) ** 2
    return Gamma * Gamma * beta_gamma_sq / (8.0 * M * M * gamma**4)


def _check_pt(p: float, t: float) -> float:
    p = _check_nonnegative("p", p)
    t = _check_nonnegative("t", t)
    pt = p * t
    if pt == 0.0:
        raise SingularityError("Xi is singular at pt = 0", details={"p": p, "t": t})
    return pt


def _xi_core(pt: float, coefficient: complex) -> complex:
    """
    (pi/2)(H1 - i J1) - 1 + c (1 + (pi/2)(Y1 - H1)), rearranged as
    (pi/2)(Y1 - i J1) + ((pi/2) S - 1)(1 - c) with S = H1 - Y1
    """
    j1 = specfun.bessel_j1(pt)
    y1 = specfun.bessel_y1(pt)
    if specfun.regime(pt, "h1") == "asymptotic":
        s = specfun.struve_minus_y1_asymptotic(pt)
    else:
        s = specfun.struve_h1(pt) - y1
    return 0.5 * math.pi * complex(y1, -j1) + (0.5 * math.pi * s - 1.0) * (1.0 - coefficient)


def xi_function(M: float, p: float, t: float) -> complex:
    """
    Xi(M, p, t) built from J1(pt), Y1(pt) and H1(pt)

    Raises:
        SingularityError: when pt = 0
    """
    M = _check_positive("M", M)
    pt = _check_pt(p, t)
    ratio_sq = (p / M) ** 2
    coefficient = (1.0 - ratio_sq) / (1.0 + ratio_sq) ** 2
    return _xi_core(pt, coefficient)


def xi_asymptotic(p: float, t: float) -> complex:
    """Large-pt form -i sqrt(pi/(2pt)) exp(i(pt - 3pi/4))"""
    p, t = float(p), float(t)
    pt = p * t
    if not (math.isfinite(pt) and pt > 0.0) or p < 0.0:
        raise DomainError(f"xi_asymptotic needs pt > 0, got p={p}, t={t}")
    return -1j * math.sqrt(math.pi / (2.0 * pt)) * cmath.exp(1j * (pt - 0.75 * math.pi))


def _check_pair(model: RestModel, ctx: LabContext) -> None:
    if not isinstance(model, RestModel):
        raise DomainError("Expected a RestModel")
    if not model.is_small:
        raise DomainError(
            f"Gamma_N/M = {model.ratio:.3e} exceeds ratio_max = {model.ratio_max:.3e}",
            error_code="width_ratio",
        )
    if abs(ctx.M - model.M) > 1e-12 * model.M:
        raise DomainError(f"LabContext mass {ctx.M} differs from model mass {model.M}")


def exp_mode_sum_lab(model: RestModel, ctx: LabContext, t: float) -> complex:
    """sum_j w_j exp(-(t/2)(Gamma_j/gamma + 2 i M gamma))"""
    _check_pair(model, ctx)
    t = _check_nonnegative("t", t)
    gamma = ctx.gamma
    phase = cmath.exp(-1j * model.M * gamma * t)
    modulus = math.fsum(m.w * math.exp(-0.5 * m.gamma * t / gamma) for m in model.modeset.modes)
    return modulus * phase


def upsilon_mode_sum(modeset: ExpModeSet, M: float, p: float, t: float) -> complex:
    """sum_j w_j exp(-Upsilon(M, Gamma_j, p) t / 2)"""
    total = 0j
    for mode in modeset.modes:
        minus, plus = lambda_mp(M, mode.gamma, p)
        total += mode.w * math.exp(-0.5 * minus * t) * cmath.exp(-0.5j * plus * t)
    return total


def xi_term(model: RestModel, p: float, t: float) -> complex:
    """i p sum_j w_j Gamma_j / (pi M^2) Xi(M, p, t); zero at p = 0"""
    if p == 0.0:
        return 0j
    prefactor = p * model.modeset.mean_width / (math.pi * model.M**2)
    return 1j * prefactor * xi_function(model.M, p, t)


def validity_warnings(
    model: RestModel,
    ctx: LabContext,
    t: float,
    validity_factor: Optional[float] = None,
) -> List[ValidityWarning]:
    """
    Regime conditions of the closed form that fail at time t

    Flags t max(10 Gamma_1, M) < factor and, for p > 0, pt < factor.
    """
    factor = validity_factor if validity_factor is not None else get_settings().validity_factor
    warnings: List[ValidityWarning] = []
    gamma1 = model.modeset.modes[0].gamma
    early = t * max(10.0 * gamma1, model.M)
    if early < factor:
        warnings.append(
            ValidityWarning(
                kind="early_time",
                message=f"t max(10 Gamma_1, M) = {early:.4g} is below {factor:g}",
                margin=early,
                required=factor,
            )
        )
    if ctx.p > 0.0 and ctx.p * t < factor:
        warnings.append(
            ValidityWarning(
                kind="pt",
                message=f"pt = {ctx.p * t:.4g} is below {factor:g}",
                margin=ctx.p * t,
                required=factor,
            )
        )
    if not model.is_small:
        warnings.append(
            ValidityWarning(
                kind="width_ratio",
                message=f"Gamma_N/M = {model.ratio:.3e} exceeds {model.ratio_max:.3e}",
                margin=model.ratio,
                required=model.ratio_max,
            )
        )
    return warnings


def survival_probability_lab(
    model: RestModel,
    ctx: LabContext,
    t: float,
    clamp: bool = False,
    validity_factor: Optional[float] = None,
) -> LabEvaluation:
    """
    Closed-form lab-frame survival probability P_p(t)

    Args:
        model: Rest-frame model satisfying Gamma_N/M <= ratio_max
        ctx: Momentum context for the same mass
        t: Time
        clamp: Clamp the value to [0, 1]
        validity_factor: Operational ">>" factor (settings default)

    Returns:
        LabEvaluation with the raw (or clamped) value and regime warnings

    Raises:
        SingularityError: t = 0 with p > 0
        DomainError: invalid model or arguments
    """
    _check_pair(model, ctx)
    t = _check_nonnegative("t", t)
    if ctx.p > 0.0 and t == 0.0:
        raise SingularityError("Closed form is singular at pt = 0 for p > 0")
    amplitude = upsilon_mode_sum(model.modeset, model.M, ctx.p, t) + xi_term(model, ctx.p, t)
    value = abs(amplitude) ** 2
    clamped = False
    if clamp and not 0.0 <= value <= 1.0:
        value = min(max(value, 0.0), 1.0)
        clamped = True
    warnings = validity_warnings(model, ctx, t, validity_factor)
    if warnings:
        logger.debug(f"P_p({t:.6g}) outside validity regime: {[w.kind for w in warnings]}")
    return LabEvaluation(t=t, value=value, amplitude=amplitude, warnings=tuple(warnings), clamped=clamped)


def full_line_lorentzian_probability(M: float, Gamma: float, p: float, t: float) -> float:
    """Exact lab law exp(-Gamma_p t) of a Lorentzian extended to the whole real line"""
    t = _check_nonnegative("t", t)
    return math.exp(-gamma_p_exact(M, Gamma, p) * t)


def breit_wigner_amplitude_lab(M: float, Gamma: float, p: float, t: float) -> complex:
    """
    Truncated Breit-Wigner amplitude for Gamma/M << 1

    exp(-i sqrt((M - i Gamma/2)^2 + p^2) t) + i Gamma p/(2 pi M^2) Xi_BW, where
    Xi_BW carries the complex coefficient (1 + i p/M)^-2.
    """
    M = _check_positive("M", M)
    Gamma = _check_positive("Gamma", Gamma)
    t = _check_nonnegative("t", t)
    p = _check_nonnegative("p", p)
    pole = cmath.exp(-1j * cmath.sqrt(complex(M, -0.5 * Gamma) ** 2 + p * p) * t)
    if p == 0.0:
        return pole
    pt = _check_pt(p, t)
    coefficient = (1.0 + 1j * p / M) ** -2
    return pole + 1j * Gamma * p / (2.0 * math.pi * M * M) * _xi_core(pt, coefficient)


def breit_wigner_asymptotic_amplitude(M: float, Gamma: float, p: float, t: float) -> complex:
    """kappa-corrected exponential plus the inverse-power term, for pt >> 1"""
    M = _check_positive("M", M)
    Gamma = _check_positive("Gamma", Gamma)
    pt = _check_pt(p, t)
    gamma = lorentz_gamma(M, p)
    kappa = bw_kappa(M, Gamma, p)
    rate = complex((1.0 + kappa) * Gamma / (2.0 * gamma), (1.0 - kappa) * M * gamma)
    power = Gamma * p / (2.0 * M * M * math.sqrt(2.0 * math.pi * pt))
    return cmath.exp(-rate * t) + power * cmath.exp(1j * (pt - 0.75 * math.pi))


def breit_wigner_exponential_probability(M: float, Gamma: float, p: float, t: float) -> float:
    """exp(-(1 + kappa) Gamma t / gamma)"""
    t = _check_nonnegative("t", t)
    gamma = lorentz_gamma(M, p)
    return math.exp(-(1.0 + bw_kappa(M, Gamma, p)) * Gamma * t / gamma)


def power_law_tail(spec: TailSpec, p: float, t: float) -> float:
    """
    Long-time law (Gamma(1+alpha) omega0(mu0))^2 (chi_p/t)^(2(1+alpha))

    Satisfies power_law_tail(spec, p, t) = power_law_tail(spec, 0, t/chi_p).
    """
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"t must be positive, got {t}")
    chi = chi_p(spec.mu0, p)
    strength = math.gamma(1.0 + spec.alpha) * spec.omega0_at_mu0
    return strength**2 * (chi / t) ** (2.0 * (1.0 + spec.alpha))


def power_law_tail_amplitude(spec: TailSpec, p: float, t: float) -> complex:
    """Long-time amplitude including its phase"""
    t = float(t)
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError(f"t must be positive, got {t}")
    chi = chi_p(spec.mu0, p)
    strength = math.gamma(1.0 + spec.alpha) * spec.omega0_at_mu0
    phase = 0.5 * math.pi * (1.0 + spec.alpha) + math.hypot(spec.mu0, p) * t
    return strength * cmath.exp(-1j * phase) * (chi / t) ** (1.0 + spec.alpha)
