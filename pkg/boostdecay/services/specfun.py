"""
Cylinder and Struve functions of order one on the real half-line

Each function switches between three evaluations:

* power series for x <= 8,
* an integral representation evaluated by Gauss-Legendre (or periodic
  trapezoidal) quadrature in the intermediate range,
* the Hankel (J1, Y1) or Struve (H1 - Y1) asymptotic expansion beyond.

The switch points are listed in ``SPECFUN_CROSSOVERS``.
"""

import math
from typing import Callable, Dict, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from boostdecay.core.exceptions import DomainError, SingularityError

EULER_GAMMA = 0.57721566490153286061
TWO_OVER_PI = 2.0 / math.pi
_EPS = 1e-17
_MAX_TERMS = 200

# (series upper bound, asymptotic lower bound) per function
SPECFUN_CROSSOVERS: Dict[str, Tuple[float, float]] = {
    "j1": (8.0, 25.0),
    "y1": (8.0, 25.0),
    "h1": (8.0, 40.0),
}

_TRAPEZOID_NODES = 96
_LEGENDRE_NODES = 96
_LEG_X, _LEG_W = leggauss(_LEGENDRE_NODES)
# Laplace-type integrand is below e^-45 past this scaled abscissa
_LAPLACE_CUTOFF = 45.0


def _check_argument(x: float, allow_zero: bool = True) -> float:
    try:
        value = float(x)
    except (TypeError, ValueError) as e:
        raise DomainError(f"Argument must be a real number, got {x!r}") from e
    if not math.isfinite(value):
        raise DomainError(f"Argument must be finite, got {value}")
    if value < 0.0:
        raise DomainError(f"Argument must be nonnegative, got {value}")
    if value == 0.0 and not allow_zero:
        raise SingularityError("Y1 diverges at x = 0", details={"x": 0.0})
    return value


def _gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    half = 0.5 * (b - a)
    nodes = 0.5 * (b + a) + half * _LEG_X
    return float(half * np.dot(_LEG_W, f(nodes)))


# Power series


def _j1_series(x: float) -> float:
    h = 0.5 * x
    term = h
    total = term
    h2 = h * h
    for k in range(1, _MAX_TERMS):
        term *= -h2 / (k * (k + 1))
        total += term
        if abs(term) < _EPS * max(abs(total), 1e-300):
            break
    return total


def _y1_series(x: float) -> float:
    h = 0.5 * x
    h2 = h * h
    # psi(k+1) + psi(k+2) = -2 gamma_E + H_k + H_{k+1}
    harmonic = 0.0
    term = h  # (x/2)^(2k+1) (-1)^k / (k! (k+1)!)
    total = term * (-2.0 * EULER_GAMMA + 1.0)
    for k in range(1, _MAX_TERMS):
        harmonic += 1.0 / k
        term *= -h2 / (k * (k + 1))
        piece = term * (-2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (k + 1))
        total += piece
        if abs(piece) < _EPS * max(abs(total), 1e-300):
            break
    return TWO_OVER_PI * _j1_series(x) * math.log(h) - TWO_OVER_PI / x - total / math.pi


def _h1_series(x: float) -> float:
    h = 0.5 * x
    h2 = h * h
    # Gamma(3/2) Gamma(5/2) = 3 pi / 8
    term = h2 / (3.0 * math.pi / 8.0)
    total = term
    for k in range(1, _MAX_TERMS):
        term *= -h2 / ((k + 0.5) * (k + 1.5))
        total += term
        if abs(term) < _EPS * max(abs(total), 1e-300):
            break
    return total


# Integral representations


def _j1_integral(x: float) -> float:
    # J1(x) = (1/2pi) int_0^{2pi} cos(t - x sin t) dt, periodic integrand
    theta = np.linspace(0.0, 2.0 * math.pi, _TRAPEZOID_NODES, endpoint=False)
    return float(np.mean(np.cos(theta - x * np.sin(theta))))


def _y1_integral(x: float) -> float:
    oscillatory = _gauss_legendre(lambda th: np.sin(x * np.sin(th) - th), 0.0, math.pi)
    # int_0^inf sinh(t) e^{-x sinh t} dt with s = sinh t
    laplace = _gauss_legendre(
        lambda s: s / np.sqrt(1.0 + s * s) * np.exp(-x * s),
        0.0,
        _LAPLACE_CUTOFF / x,
    )
    return oscillatory / math.pi - TWO_OVER_PI * laplace


def _h1_integral(x: float) -> float:
    inner = _gauss_legendre(lambda th: np.cos(th) ** 2 * np.sin(x * np.sin(th)), 0.0, 0.5 * math.pi)
    return TWO_OVER_PI * x * inner


# Asymptotic expansions


def _hankel_pq(x: float) -> Tuple[float, float]:
    """P and Q of the Hankel expansion for order one (4 nu^2 = 4)"""
    mu = 4.0
    p_sum = 1.0
    q_sum = 0.0
    a = 1.0
    previous = math.inf
    for k in range(1, _MAX_TERMS):
        a *= (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        magnitude = abs(a)
        if magnitude > previous:
            break
        if k % 2 == 1:
            q_sum += a if (k // 2) % 2 == 0 else -a
        else:
            p_sum += a if (k // 2) % 2 == 0 else -a
        if magnitude < _EPS:
            break
        previous = magnitude
    return p_sum, q_sum


def _j1_asymptotic(x: float) -> float:
    p_sum, q_sum = _hankel_pq(x)
    chi = x - 0.75 * math.pi
    return math.sqrt(TWO_OVER_PI / x) * (p_sum * math.cos(chi) - q_sum * math.sin(chi))


def _y1_asymptotic(x: float) -> float:
    p_sum, q_sum = _hankel_pq(x)
    chi = x - 0.75 * math.pi
    return math.sqrt(TWO_OVER_PI / x) * (p_sum * math.sin(chi) + q_sum * math.cos(chi))


def struve_minus_y1_asymptotic(x: float) -> float:
    """
    Asymptotic series of H1(x) - Y1(x)

    (1/pi) sum_k Gamma(k+1/2)/Gamma(3/2-k) (x/2)^(-2k), truncated at its
    smallest term.
    """
    x = _check_argument(x, allow_zero=False)
    coefficient = 2.0
    ratio = (2.0 / x) ** 2
    power = 1.0
    total = coefficient
    previous = math.inf
    for k in range(1, _MAX_TERMS):
        coefficient *= (k - 0.5) * (1.5 - k)
        power *= ratio
        piece = coefficient * power
        if abs(piece) > previous:
            break
        total += piece
        if abs(piece) < _EPS:
            break
        previous = abs(piece)
    return total / math.pi


def _h1_asymptotic(x: float) -> float:
    return _y1_asymptotic(x) + struve_minus_y1_asymptotic(x)


_REGIMES: Dict[str, Dict[str, Callable[[float], float]]] = {
    "j1": {"series": _j1_series, "integral": _j1_integral, "asymptotic": _j1_asymptotic},
    "y1": {"series": _y1_series, "integral": _y1_integral, "asymptotic": _y1_asymptotic},
    "h1": {"series": _h1_series, "integral": _h1_integral, "asymptotic": _h1_asymptotic},
}


def regime(x: float, name: str) -> str:
    """Name of the evaluation regime used for ``name`` at ``x``"""
    lower, upper = SPECFUN_CROSSOVERS[name]
    if x <= lower:
        return "series"
    if x <= upper:
        return "integral"
    return "asymptotic"


def evaluate_regime(name: str, which: str, x: float) -> float:
    """Evaluate ``name`` with an explicit regime, bypassing the switch"""
    if name not in _REGIMES or which not in _REGIMES[name]:
        raise DomainError(f"Unknown function/regime: {name}/{which}")
    x = _check_argument(x, allow_zero=(name != "y1"))
    return _REGIMES[name][which](x)


def bessel_j1(x: float) -> float:
    """
    Bessel function of the first kind J1(x)

    Args:
        x: Nonnegative finite argument

    Returns:
        J1(x), absolute error below 1e-10 on [0, 50]
    """
    x = _check_argument(x)
    if x == 0.0:
        return 0.0
    return _REGIMES["j1"][regime(x, "j1")](x)


def bessel_y1(x: float) -> float:
    """
    Bessel function of the second kind Y1(x)

    Raises:
        SingularityError: at x = 0
    """
    x = _check_argument(x, allow_zero=False)
    return _REGIMES["y1"][regime(x, "y1")](x)


def struve_h1(x: float) -> float:
    """Struve function H1(x)"""
    x = _check_argument(x)
    if x == 0.0:
        return 0.0
    return _REGIMES["h1"][regime(x, "h1")](x)
