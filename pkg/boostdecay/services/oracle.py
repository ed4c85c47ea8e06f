"""
Brute-force survival amplitudes from the mass distribution density

A_0(t) = int omega(m) e^{-imt} dm and A_p(t) = int omega(m) e^{-i sqrt(p^2+m^2) t} dm
evaluated by panel quadrature. Lorentzian sums are folded onto m >= 0 with the
mirror pole at -M, so the rest and lab paths share one integrand.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from boostdecay.core.exceptions import DomainError, PrecisionError
from boostdecay.models.mdd import BreitWigner, LorentzianSum, MddSpec, QuadratureConfig, ThresholdPowerLaw
from boostdecay.models.modes import ExpModeSet, RestModel, SurvivalCurve
from boostdecay.services.prony import evaluate_modulus_grid
from boostdecay.services.quadrature import QuadratureResult, SingularEndpoint, oscillatory_integral

logger = logging.getLogger(__name__)

_SMALL_EXPONENT = 1e-8
_TRANSFORM_BLOCK = 256
_LINK_SAMPLES = 2000
_LINK_BAND_WIDTHS = 10.0


@dataclass(frozen=True)
class _Kernel:
    """Real weight g(m) on [lower, inf) with its grading centres and tail mass"""

    g: Callable[[np.ndarray], np.ndarray]
    lower: float
    M: float
    max_width: float
    centers: List[Tuple[float, float]]
    tail_mass: Callable[[float], float]
    singular: Optional[SingularEndpoint] = None


def _lorentzian_tail(center: float, width: float, cut: float) -> float:
    """int_cut^inf of a unit Lorentzian centred at ``center``"""
    return (0.5 * math.pi - math.atan(2.0 * (cut - center) / width)) / math.pi


def _folded_kernel(mdd: LorentzianSum, sign: float = 1.0) -> _Kernel:
    def g(m: np.ndarray) -> np.ndarray:
        return sign * (mdd.density(m) + mdd.density(-m))

    def tail(cut: float) -> float:
        return math.fsum(
            mode.w * (_lorentzian_tail(mdd.M, mode.gamma, cut) + _lorentzian_tail(-mdd.M, mode.gamma, cut))
            for mode in mdd.modeset.modes
        )

    return _Kernel(
        g=g,
        lower=0.0,
        M=mdd.M,
        max_width=mdd.max_width,
        centers=[(mdd.M, mode.gamma) for mode in mdd.modeset.modes],
        tail_mass=tail,
    )


def _breit_wigner_kernel(mdd: BreitWigner) -> _Kernel:
    return _Kernel(
        g=mdd.density,
        lower=0.0,
        M=mdd.M,
        max_width=mdd.Gamma,
        centers=[(mdd.M, mdd.Gamma)],
        tail_mass=lambda cut: _lorentzian_tail(mdd.M, mdd.Gamma, cut) / mdd.norm,
    )


def _threshold_kernel(mdd: ThresholdPowerLaw) -> _Kernel:
    alpha = mdd.tail.alpha
    a = 1.0 + alpha

    def tail(cut: float) -> float:
        x = (cut - mdd.tail.mu0) / mdd.scale
        c = mdd.tail.omega0_at_mu0 * mdd.scale**a
        if mdd.profile == "exponential":
            return float(c * gamma_fn(a) * gammaincc(a, x))
        return float(c * 0.5 * gamma_fn(0.5 * a) * gammaincc(0.5 * a, x * x))

    singular = SingularEndpoint(alpha=alpha, smooth=mdd.form_factor) if alpha > 0.0 else None
    return _Kernel(
        g=mdd.density,
        lower=mdd.tail.mu0,
        M=mdd.M,
        max_width=mdd.scale,
        centers=[(mdd.tail.mu0, mdd.scale)],
        tail_mass=tail,
        singular=singular,
    )


def _kernel(mdd: MddSpec, sign: float = 1.0) -> _Kernel:
    if isinstance(mdd, LorentzianSum):
        return _folded_kernel(mdd, sign)
    if sign != 1.0:
        raise DomainError("The l0 sign applies to the Lorentzian-sum form only")
    if isinstance(mdd, BreitWigner):
        return _breit_wigner_kernel(mdd)
    if isinstance(mdd, ThresholdPowerLaw):
        return _threshold_kernel(mdd)
    raise DomainError(f"Unsupported mass distribution: {type(mdd).__name__}")


def _integrate(kernel: _Kernel, p: float, t: float, cfg: QuadratureConfig) -> QuadratureResult:
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    if not (math.isfinite(p) and p >= 0.0):
        raise DomainError(f"p must be finite and >= 0, got {p}")
    upper = cfg.m_max(kernel.M, kernel.max_width)
    return oscillatory_integral(
        kernel.g,
        kernel.lower,
        upper,
        p,
        t,
        cfg,
        centers=kernel.centers,
        singular=kernel.singular,
        tail_mass=kernel.tail_mass,
    )


def integrate_amplitude(mdd: MddSpec, p: float, t: float, cfg: Optional[QuadratureConfig] = None, l0: int = 1) -> QuadratureResult:
    """
    Quadrature of the lab amplitude with its error estimate

    Args:
        mdd: Mass distribution
        p: Momentum (0 gives the rest amplitude)
        t: Time
        cfg: Quadrature settings
        l0: Overall sign +-1 of the Lorentzian-sum form

    Raises:
        PrecisionError: quadrature did not converge
    """
    if l0 not in (1, -1):
        raise DomainError(f"l0 must be +1 or -1, got {l0}")
    cfg = cfg or QuadratureConfig()
    result = _integrate(_kernel(mdd, float(l0)), p, t, cfg)
    logger.debug(f"A(p={p:.6g}, t={t:.6g}) = {result.value:.12g} +- {result.error:.2e} on {result.panels} panels")
    return result


def amplitude_rest_oracle(mdd: MddSpec, t: float, cfg: Optional[QuadratureConfig] = None) -> complex:
    """A_0(t) = int omega(m) e^{-imt} dm"""
    return integrate_amplitude(mdd, 0.0, t, cfg).value


def amplitude_lab_oracle(
    mdd: MddSpec,
    p: float,
    t: float,
    cfg: Optional[QuadratureConfig] = None,
    l0: int = 1,
) -> complex:
    """A_p(t) = int omega(m) e^{-i sqrt(p^2 + m^2) t} dm"""
    return integrate_amplitude(mdd, p, t, cfg, l0).value


def mdd_normalization(mdd: MddSpec, cfg: Optional[QuadratureConfig] = None) -> float:
    """int omega(m) dm including the analytic tail beyond the truncation"""
    return float(integrate_amplitude(mdd, 0.0, 0.0, cfg).value.real)


def negative_mass_contribution(mdd: LorentzianSum, t: float, cfg: Optional[QuadratureConfig] = None) -> float:
    """|int_{-inf}^0 omega(m) e^{-imt} dm| for a Lorentzian sum"""
    if not isinstance(mdd, LorentzianSum):
        raise DomainError("Only the Lorentzian sum extends to negative masses")
    cfg = cfg or QuadratureConfig()

    def mirrored(m: np.ndarray) -> np.ndarray:
        return mdd.density(-m)

    # omega(-m) is real, so the modulus is unchanged by conjugating e^{+imt}
    kernel = _Kernel(
        g=mirrored,
        lower=0.0,
        M=mdd.M,
        max_width=mdd.max_width,
        centers=[],
        tail_mass=lambda cut: math.fsum(
            mode.w * _lorentzian_tail(-mdd.M, mode.gamma, cut) for mode in mdd.modeset.modes
        ),
    )
    return abs(_integrate(kernel, 0.0, t, cfg).value)


def lorentzian_cosine_transform(modeset: ExpModeSet, m_offset: np.ndarray) -> np.ndarray:
    """(1/pi) int_0^inf sum_j w_j e^{-Gamma_j t/2} cos(m' t) dt, mode by mode"""
    m_offset = np.asarray(m_offset, dtype=float)
    out = np.zeros_like(m_offset)
    for mode in modeset.modes:
        half = 0.5 * mode.gamma
        out += mode.w * half / (math.pi * (half * half + m_offset * m_offset))
    return out


def _segment_factor(z: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """(1 - e^{-z delta}) / z with its z -> 0 limit"""
    zd = z * delta
    small = np.abs(zd) < _SMALL_EXPONENT
    safe_z = np.where(small, 1.0, z)
    return np.where(small, delta * (1.0 - 0.5 * zd), (1.0 - np.exp(-zd)) / safe_z)


class _SampledTransform:
    """
    (1/pi) int_0^inf v(t) cos(m' t) dt for log-linear interpolation of samples

    The curve is extended to v(0) = 1 and past its last sample with the last
    segment's decay rate. Each segment is integrated in closed form, so the
    only approximation is the interpolation itself.

    Raises:
        PrecisionError: non-positive samples, a non-decaying last segment, or
            an extrapolated tail above the quadrature tolerance
    """

    def __init__(self, curve: SurvivalCurve, cfg: QuadratureConfig):
        t = curve.times
        v = curve.values
        if np.any(v <= 0.0):
            raise PrecisionError("Cosine transform needs strictly positive modulus samples", estimate=0j, error=math.inf)
        if t[0] > 0.0:
            t = np.concatenate([[0.0], t])
            v = np.concatenate([[1.0], v])
        self.t = t
        self.v = v
        self.delta = np.diff(t)
        self.rates = -np.diff(np.log(v)) / self.delta
        if self.rates[-1] <= 0.0:
            raise PrecisionError(
                "Modulus does not decay at the end of the samples; the cosine transform diverges",
                estimate=0j,
                error=math.inf,
            )
        self.tail_mass = float(v[-1] / self.rates[-1])
        total = math.pi * float(self(np.array([0.0]))[0])
        if self.tail_mass > max(cfg.abs_tol, cfg.rel_tol * total):
            raise PrecisionError(
                f"Samples end at t = {t[-1]:.6g} with extrapolated mass {self.tail_mass:.3e} above tolerance",
                estimate=complex(total),
                error=self.tail_mass,
            )

    def __call__(self, m_offset: np.ndarray) -> np.ndarray:
        offsets = np.asarray(m_offset, dtype=float)
        flat = offsets.ravel()
        out = np.empty(flat.size)
        for start in range(0, flat.size, _TRANSFORM_BLOCK):
            m = flat[start:start + _TRANSFORM_BLOCK, None]
            z = self.rates[None, :] - 1j * m
            segments = self.v[:-1] * np.exp(1j * m * self.t[:-1]) * _segment_factor(z, self.delta[None, :])
            tail = self.v[-1] * np.exp(1j * m[:, 0] * self.t[-1]) / z[:, -1]
            out[start:start + _TRANSFORM_BLOCK] = (np.sum(segments.real, axis=1) + tail.real) / math.pi
        return out.reshape(offsets.shape)


def mdd_from_modulus(
    modulus_curve: SurvivalCurve,
    M: float,
    m_offset: float,
    cfg: Optional[QuadratureConfig] = None,
    modeset: Optional[ExpModeSet] = None,
) -> float:
    """
    omega(M + m') = (1/pi) |int_0^inf sqrt(P0(t')) cos(m' t') dt'|

    Args:
        modulus_curve: Samples of sqrt(P0)
        M: Resonance mass the offset is taken from
        m_offset: m' = m - M
        cfg: Tolerances the extrapolated tail of the samples must meet
        modeset: Fitted mode set of the curve; its closed-form transform is
            used when given

    Raises:
        PrecisionError: non-decaying samples, or samples that stop too early
    """
    if not (math.isfinite(M) and M > 0.0):
        raise DomainError(f"Mass M must be positive, got {M}")
    if modeset is not None:
        return float(lorentzian_cosine_transform(modeset, np.array([m_offset]))[0])
    transform = _SampledTransform(modulus_curve, cfg or QuadratureConfig())
    value = abs(float(transform(np.array([float(m_offset)]))[0]))
    logger.debug(f"omega(M + {m_offset:.6g}) = {value:.12g} from {len(modulus_curve)} samples")
    return value


def modulus_samples(modeset: ExpModeSet, count: int = _LINK_SAMPLES) -> SurvivalCurve:
    """sqrt(P0) at t = 0 and on a geometric grid until it falls below 1e-19"""
    widths = modeset.widths
    times = np.concatenate([[0.0], np.geomspace(1e-3 / widths[-1], 90.0 / widths[0], count - 1)])
    return SurvivalCurve.from_arrays(times, evaluate_modulus_grid(modeset, times))


def double_integral_link_check(
    model: RestModel,
    p: float,
    t: float,
    cfg: Optional[QuadratureConfig] = None,
    samples: Optional[SurvivalCurve] = None,
) -> float:
    """
    P_p(t) from samples of the rest modulus through the double integral

    The inner cosine transform of the samples gives omega(m - M) + omega(m + M)
    on m >= 0; the outer integral is the lab amplitude's mass integral. Past
    |m'| = 10 Gamma_N the transform is continued as m'^-2 from its value
    there, which keeps the sample spacing from aliasing into the far wings.

    Args:
        model: Rest-frame model
        p: Momentum
        t: Lab time
        cfg: Quadrature settings
        samples: Modulus samples (modulus_samples of the model when omitted)
    """
    cfg = cfg or QuadratureConfig()
    modeset = model.modeset
    M = model.M
    transform = _SampledTransform(samples if samples is not None else modulus_samples(modeset), cfg)
    band = _LINK_BAND_WIDTHS * float(modeset.widths[-1])
    edge = float(transform(np.array([band]))[0])

    def omega(offset: np.ndarray) -> np.ndarray:
        out = np.empty(offset.shape)
        inside = np.abs(offset) <= band
        out[inside] = transform(offset[inside])
        out[~inside] = edge * (band / offset[~inside]) ** 2
        return out

    def inner(m: np.ndarray) -> np.ndarray:
        return omega(m - M) + omega(m + M)

    reference = _folded_kernel(LorentzianSum(modeset=modeset, M=M))
    kernel = _Kernel(
        g=inner,
        lower=0.0,
        M=M,
        max_width=reference.max_width,
        # panel edges on the band ends keep the m'^-2 join off panel interiors
        centers=reference.centers + [(M - band, band), (M + band, band)],
        tail_mass=reference.tail_mass,
    )
    amplitude = _integrate(kernel, p, t, cfg).value
    return abs(amplitude) ** 2


def tail_slope(mdd: MddSpec, p: float, times: Sequence[float], cfg: Optional[QuadratureConfig] = None) -> float:
    """Least-squares slope of log|A_p(t)|^2 against log t"""
    times = np.asarray(times, dtype=float)
    if times.size < 2 or np.any(times <= 0.0):
        raise DomainError("tail_slope needs at least two positive times")
    cfg = cfg or QuadratureConfig()
    probabilities = np.array([abs(amplitude_lab_oracle(mdd, p, float(t), cfg)) ** 2 for t in times])
    return float(np.polyfit(np.log(times), np.log(probabilities), 1)[0])
