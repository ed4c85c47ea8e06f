"""
Panel Gauss quadrature for oscillatory mass integrals

Evaluates int_lower^upper g(m) exp(-i E(m) t) dm with E(m) = sqrt(p^2 + m^2)
on panels that are at most ``panel_phase / t`` wide and geometrically graded
around resonance centres. Each panel is integrated with an n-point and an
n/2-point Gauss-Legendre rule; their difference is the error estimate. The
truncated tail beyond ``upper`` is added through one integration by parts.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from boostdecay.core.exceptions import PrecisionError
from boostdecay.models.mdd import QuadratureConfig

logger = logging.getLogger(__name__)

Weight = Callable[[np.ndarray], np.ndarray]

_CHUNK_PANELS = 32768
_MAX_REFINEMENTS = 6
_GRADING_START = 0.125  # first graded breakpoint at width/8 from the centre


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value with its error estimate"""

    value: complex
    error: float
    panels: int
    tail_bound: float = 0.0

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class SingularEndpoint:
    """(m - lower)^alpha factor handled by Gauss-Jacobi on the first panel"""

    alpha: float
    smooth: Weight


def energy(m: np.ndarray, p: float) -> np.ndarray:
    return np.hypot(p, m)


def graded_points(center: float, width: float, lower: float, upper: float) -> np.ndarray:
    """center +- (width/8) 2^k inside (lower, upper)"""
    points: List[float] = []
    if lower < center < upper:
        points.append(center)
    offset = _GRADING_START * width
    reach = max(upper - center, center - lower)
    while offset < reach:
        for point in (center - offset, center + offset):
            if lower < point < upper:
                points.append(point)
        offset *= 2.0
    return np.array(points)


def breakpoints(
    lower: float,
    upper: float,
    t: float,
    panel_phase: float,
    centers: Sequence[Tuple[float, float]],
    max_panels: int,
) -> np.ndarray:
    """
    Panel edges on [lower, upper]

    Args:
        centers: (center, width) pairs to grade around

    Raises:
        PrecisionError: more than max_panels panels would be needed
    """
    pieces = [np.array([lower, upper])]
    if t > 0.0:
        step = panel_phase / t
        count = math.ceil((upper - lower) / step)
        if count > max_panels:
            raise PrecisionError(
                f"Oscillation grid needs {count} panels, max_panels = {max_panels}",
                estimate=0j,
                error=math.inf,
            )
        pieces.append(lower + step * np.arange(1, count))
    for center, width in centers:
        pieces.append(graded_points(center, width, lower, upper))
    edges = np.unique(np.concatenate(pieces))
    return edges[(edges >= lower) & (edges <= upper)]


class PanelRule:
    """Gauss-Legendre n and n/2 point rules on [-1, 1]"""

    def __init__(self, nodes: int):
        self.nodes = nodes
        self.x_hi, self.w_hi = leggauss(nodes)
        self.x_lo, self.w_lo = leggauss(max(nodes // 2, 2))

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], edges: np.ndarray) -> Tuple[complex, float]:
        """Sum over panels; returns (value, summed |n - n/2| difference)"""
        real_parts: List[float] = []
        imag_parts: List[float] = []
        errors: List[float] = []
        for start in range(0, edges.size - 1, _CHUNK_PANELS):
            a = edges[start:start + _CHUNK_PANELS]
            b = edges[start + 1:start + _CHUNK_PANELS + 1]
            a = a[: b.size]
            mid = 0.5 * (a + b)[:, None]
            half = 0.5 * (b - a)[:, None]
            hi = np.sum(f(mid + half * self.x_hi) * self.w_hi, axis=1) * half[:, 0]
            lo = np.sum(f(mid + half * self.x_lo) * self.w_lo, axis=1) * half[:, 0]
            total = np.sum(hi)
            real_parts.append(float(total.real))
            imag_parts.append(float(total.imag))
            errors.append(float(np.sum(np.abs(hi - lo))))
        return complex(math.fsum(real_parts), math.fsum(imag_parts)), math.fsum(errors)


def _jacobi_panel(
    singular: SingularEndpoint,
    a: float,
    b: float,
    phase: Callable[[np.ndarray], np.ndarray],
    nodes: int,
) -> Tuple[complex, float]:
    """int_a^b (m - a)^alpha smooth(m) phase(m) dm"""
    values = []
    for n in (nodes, max(nodes // 2, 2)):
        x, w = roots_jacobi(n, 0.0, singular.alpha)
        m = a + 0.5 * (b - a) * (1.0 + x)
        scale = (0.5 * (b - a)) ** (1.0 + singular.alpha)
        values.append(scale * np.sum(w * singular.smooth(m) * phase(m)))
    return complex(values[0]), float(abs(values[0] - values[1]))


def _endpoint_tail(g: Weight, upper: float, p: float, t: float) -> Tuple[complex, float]:
    """
    int_u^inf g e^{-iEt} dm ~ g(u) e^{-iE(u)t} / (i t E'(u)); the next
    integration-by-parts term |(g/E')'(u)| / t^2 is the remainder estimate
    """
    step = 1e-6 * upper
    m = np.array([upper - step, upper, upper + step])
    ratio = g(m) * energy(m, p) / m  # g / E'
    leading = ratio[1] * np.exp(-1j * t * energy(m[1], p)) / (1j * t)
    remainder = abs(float(ratio[2] - ratio[0])) / (2.0 * step) / (t * t)
    return complex(leading), remainder


def oscillatory_integral(
    g: Weight,
    lower: float,
    upper: float,
    p: float,
    t: float,
    cfg: QuadratureConfig,
    centers: Sequence[Tuple[float, float]] = (),
    singular: Optional[SingularEndpoint] = None,
    tail_mass: Optional[Callable[[float], float]] = None,
) -> QuadratureResult:
    """
    int_lower^inf g(m) exp(-i sqrt(p^2 + m^2) t) dm, truncated at ``upper``

    At t > 0 the truncated tail is replaced by its leading
    integration-by-parts term g(u) exp(-i E(u) t) / (i t E'(u)); at t = 0 the
    analytic ``tail_mass`` is added when supplied.

    Raises:
        PrecisionError: error target not met within max_panels
    """
    if t > 0.0:
        def phase(m: np.ndarray) -> np.ndarray:
            return np.exp(-1j * t * energy(m, p))
    else:
        def phase(m: np.ndarray) -> np.ndarray:
            return np.ones_like(m, dtype=complex)

    def integrand(m: np.ndarray) -> np.ndarray:
        return g(m) * phase(m)

    rule = PanelRule(cfg.nodes)
    edges = breakpoints(lower, upper, t, cfg.panel_phase, centers, cfg.max_panels)

    tail_bound = tail_mass(upper) if tail_mass is not None else 0.0
    if t > 0.0:
        tail, tail_error = _endpoint_tail(g, upper, p, t)
    else:
        tail, tail_error = complex(tail_bound), 0.0

    value = 0j
    error = math.inf
    for refinement in range(_MAX_REFINEMENTS + 1):
        panels = edges.size - 1
        if panels > cfg.max_panels:
            break
        start_value = 0j
        start_error = 0.0
        body_edges = edges
        if singular is not None:
            start_value, start_error = _jacobi_panel(singular, edges[0], edges[1], phase, cfg.nodes)
            body_edges = edges[1:]
        body_value, body_error = rule.integrate(integrand, body_edges)
        value = start_value + body_value + tail
        error = start_error + body_error + tail_error
        if error <= max(cfg.abs_tol, cfg.rel_tol * abs(value)):
            logger.debug(f"Quadrature converged: panels={panels} error={error:.2e} refinement={refinement}")
            return QuadratureResult(value=value, error=error, panels=panels, tail_bound=tail_bound)
        midpoints = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, midpoints]))

    logger.error(f"Quadrature did not converge: error={error:.3e} value={value}")
    raise PrecisionError(
        f"Quadrature error {error:.3e} above tolerance after refinement",
        estimate=value,
        error=error,
    )
