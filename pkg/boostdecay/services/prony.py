"""
Prony superpositions of exponential modes

Evaluation of sum_j w_j exp(-Gamma_j t / 2) and its fit to sampled decay
curves. Each Monte Carlo restart draws log-uniform widths, descends with
Nelder-Mead over log Gamma (weights eliminated by a sum-constrained NNLS
solve), and is then polished with curve_fit over softmax weights and log
widths.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit, minimize, nnls

from boostdecay.config.settings import get_settings
from boostdecay.core.exceptions import DomainError, FitError, InputError
from boostdecay.models.modes import ExpModeSet, FitConfig, SurvivalCurve

logger = logging.getLogger(__name__)

# Weight of the sum(w) = 1 row in the augmented NNLS system
_SUM_ROW_WEIGHT = 1e4
_WEIGHT_FLOOR = 1e-15
# least_squares termination codes that mean a tolerance was met
_CONVERGED_STATUS = (1, 2, 3, 4)


@dataclass(frozen=True)
class FitReport:
    """Outcome of a Prony fit"""

    rmse: float
    restart_rmse: List[float]
    n_modes: int
    seed: int
    converged: bool
    merged: int = 0
    best_restart: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rmse": self.rmse,
            "restart_rmse": list(self.restart_rmse),
            "n_modes": self.n_modes,
            "seed": self.seed,
            "converged": self.converged,
            "merged": self.merged,
            "best_restart": self.best_restart,
        }


@dataclass(frozen=True)
class _Candidate:
    weights: np.ndarray
    widths: np.ndarray
    rmse: float
    converged: bool = field(default=False)


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"Time must be nonnegative and finite, got {t}")
    return t


def evaluate_modulus(model: ExpModeSet, t: float) -> float:
    """
    Modulus of the rest-frame amplitude, sum_j w_j exp(-Gamma_j t / 2)

    Args:
        model: Mode set
        t: Time, t >= 0

    Returns:
        Value in (0, 1], equal to 1 at t = 0
    """
    t = _check_time(t)
    return math.fsum(m.w * math.exp(-0.5 * m.gamma * t) for m in model.modes)


def evaluate_modulus_grid(model: ExpModeSet, times: Sequence[float]) -> np.ndarray:
    """Vectorised evaluate_modulus over a time array"""
    t = np.asarray(times, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0.0):
        raise DomainError("Times must be nonnegative and finite")
    return np.exp(-0.5 * np.outer(t, model.widths)) @ model.weights


def survival_probability_rest(model: ExpModeSet, t: float) -> float:
    """P0(t) = |A0(t)|^2 for the superposition"""
    return evaluate_modulus(model, t) ** 2


def stretched_exponential(t: float, tau: float, theta: float, allow_limit: bool = False) -> float:
    """
    Stretched exponential decay exp(-(t/tau)^theta)

    Args:
        t: Time, t >= 0
        tau: Characteristic time
        theta: Exponent in (0, 1); theta = 1 only with ``allow_limit``
        allow_limit: Accept the pure exponential limit theta = 1
    """
    t = _check_time(t)
    if not (math.isfinite(tau) and tau > 0.0):
        raise DomainError(f"tau must be positive, got {tau}")
    upper_ok = theta < 1.0 or (allow_limit and theta == 1.0)
    if not (theta > 0.0 and upper_ok):
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    return math.exp(-((t / tau) ** theta))


def stretched_exponential_curve(
    tau: float,
    theta: float,
    times: Sequence[float],
    values: str = "modulus",
    allow_limit: bool = False,
) -> SurvivalCurve:
    """
    Sample a stretched exponential on ``times``

    ``values="modulus"`` gives exp(-(t/tau)^theta / 2), the fit target for
    the modulus; ``"probability"`` gives the decay law itself.
    """
    probability = [stretched_exponential(t, tau, theta, allow_limit) for t in times]
    if values == "probability":
        return SurvivalCurve.from_arrays(times, probability)
    if values == "modulus":
        return SurvivalCurve.from_arrays(times, [math.sqrt(v) for v in probability])
    raise DomainError(f"values must be 'modulus' or 'probability', got {values!r}")


def rmse(model: ExpModeSet, curve: SurvivalCurve) -> float:
    """Root-mean-square error of the modulus against the curve samples"""
    residual = evaluate_modulus_grid(model, curve.times) - curve.values
    return float(np.sqrt(np.mean(residual**2)))


def merge_degenerate_modes(
    weights: np.ndarray,
    widths: np.ndarray,
    rtol: float,
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Merge sorted widths closer than ``rtol`` relative; returns the merge count"""
    merged_w: List[float] = []
    merged_g: List[float] = []
    merges = 0
    for w, g in zip(weights, widths):
        if merged_g and g - merged_g[-1] <= rtol * g:
            total = merged_w[-1] + w
            merged_g[-1] = (merged_w[-1] * merged_g[-1] + w * g) / total
            merged_w[-1] = total
            merges += 1
        else:
            merged_w.append(float(w))
            merged_g.append(float(g))
    return np.array(merged_w), np.array(merged_g), merges


def project_modes(
    weights: Sequence[float],
    widths: Sequence[float],
    rtol: Optional[float] = None,
) -> Tuple[ExpModeSet, int]:
    """
    Project raw fit parameters onto a valid mode set

    Weights are clipped positive and renormalized, widths sorted and
    degenerate widths merged.
    """
    if rtol is None:
        rtol = get_settings().merge_rtol
    w = np.asarray(weights, dtype=float)
    g = np.asarray(widths, dtype=float)
    if w.shape != g.shape or w.size == 0:
        raise DomainError("weights and widths must be nonempty and of equal length")
    if not (np.all(np.isfinite(g)) and np.all(g > 0.0)):
        raise DomainError("Fitted widths must be positive and finite")
    w = np.where(np.isfinite(w), w, 0.0)
    w = np.clip(w, _WEIGHT_FLOOR, None)
    order = np.argsort(g, kind="stable")
    w, g = w[order], g[order]
    w, g, merges = merge_degenerate_modes(w, g, rtol)
    w = w / math.fsum(w)
    return ExpModeSet.from_arrays(w, g), merges


def _design(t: np.ndarray, widths: np.ndarray) -> np.ndarray:
    return np.exp(-0.5 * np.outer(t, widths))


def _solve_weights(design: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, float]:
    n = design.shape[1]
    a = np.vstack([design, np.full((1, n), _SUM_ROW_WEIGHT)])
    b = np.concatenate([y, [_SUM_ROW_WEIGHT]])
    weights, _ = nnls(a, b, maxiter=50 * n)
    residual = design @ weights - y
    return weights, float(np.sqrt(np.mean(residual**2)))


def _rate_range(t: np.ndarray, cfg: FitConfig) -> Tuple[float, float]:
    positive = t[t > 0.0]
    lo = 0.2 / float(t[-1])
    hi = 20.0 / float(positive[0])
    if cfg.gamma_bounds is not None:
        b_lo, b_hi = cfg.gamma_bounds
        lo, hi = max(lo, b_lo), min(hi, b_hi)
        if lo >= hi:
            lo, hi = b_lo, b_hi
    return lo, hi


def _log_bounds(cfg: FitConfig) -> Tuple[float, float]:
    if cfg.gamma_bounds is None:
        return -np.inf, np.inf
    return math.log(cfg.gamma_bounds[0]), math.log(cfg.gamma_bounds[1])


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - np.max(logits)
    e = np.exp(z)
    return e / np.sum(e)


def _polish(
    t: np.ndarray,
    y: np.ndarray,
    start: _Candidate,
    cfg: FitConfig,
) -> Optional[_Candidate]:
    n = start.widths.size
    w0 = np.clip(start.weights, 1e-12, None)
    ref = int(np.argmax(w0))
    others = [j for j in range(n) if j != ref]
    log_lo, log_hi = _log_bounds(cfg)
    log_g0 = np.clip(np.log(start.widths), log_lo + 1e-12, log_hi - 1e-12)

    def unpack(params: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        params = np.asarray(params)
        logits = np.zeros(n)
        logits[others] = params[n:]
        return _softmax(logits), np.exp(params[:n])

    def model(tt: np.ndarray, *params: float) -> np.ndarray:
        weights, widths = unpack(params)
        return _design(tt, widths) @ weights

    p0 = np.concatenate([log_g0, np.log(w0[others] / w0[ref])])
    lower = np.concatenate([np.full(n, log_lo), np.full(n - 1, -np.inf)])
    upper = np.concatenate([np.full(n, log_hi), np.full(n - 1, np.inf)])
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _, _, message, status = curve_fit(
                model,
                t,
                y,
                p0=p0,
                bounds=(lower, upper),
                method="trf",
                max_nfev=cfg.max_iters,
                xtol=1e-14,
                ftol=1e-14,
                gtol=1e-14,
                full_output=True,
            )
    except (RuntimeError, ValueError) as e:
        logger.debug(f"Polish step failed: {e}")
        return None
    weights, widths = unpack(popt)
    if not (np.all(np.isfinite(widths)) and np.all(np.isfinite(weights))):
        return None
    residual = _design(t, widths) @ weights - y
    converged = status in _CONVERGED_STATUS
    if not converged:
        logger.debug(f"Polish step stopped without convergence: {message}")
    return _Candidate(weights, widths, float(np.sqrt(np.mean(residual**2))), converged=converged)


def _restart(
    t: np.ndarray,
    y: np.ndarray,
    cfg: FitConfig,
    rng: np.random.Generator,
) -> _Candidate:
    n = cfg.n_modes
    lo, hi = _rate_range(t, cfg)
    log_lo, log_hi = _log_bounds(cfg)
    x0 = np.sort(rng.uniform(math.log(lo), math.log(hi), size=n))

    def widths_of(x: np.ndarray) -> np.ndarray:
        return np.exp(np.clip(x, log_lo, log_hi))

    def objective(x: np.ndarray) -> float:
        return _solve_weights(_design(t, widths_of(x)), y)[1]

    result = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iters,
            "maxfev": 2 * cfg.max_iters,
            "xatol": 1e-10,
            "fatol": cfg.tolerance,
            "adaptive": n > 2,
        },
    )
    widths = widths_of(result.x)
    weights, error = _solve_weights(_design(t, widths), y)
    best = _Candidate(weights, widths, error, converged=bool(result.success))
    polished = _polish(t, y, best, cfg)
    if polished is not None and polished.rmse <= best.rmse:
        return polished
    return best


def fit_prony(curve: SurvivalCurve, cfg: FitConfig) -> Tuple[ExpModeSet, FitReport]:
    """
    Fit an N-mode superposition to a sampled modulus curve

    Args:
        curve: Samples of the modulus sqrt(P0(t))
        cfg: Fit settings

    Returns:
        Tuple of (mode set, fit report)

    Raises:
        InputError: fewer than 2N samples
        FitError: no restart converged, or the best RMSE misses target_rmse
    """
    n = cfg.n_modes
    if len(curve) < 2 * n:
        raise InputError(
            f"Fitting {n} modes needs at least {2 * n} samples, got {len(curve)}",
            error_code="insufficient_samples",
        )
    t, y = curve.times, curve.values
    if not np.any(t > 0.0):
        raise InputError("Curve needs samples at t > 0")

    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    candidates: List[_Candidate] = []
    for index, stream in enumerate(streams):
        candidate = _restart(t, y, cfg, np.random.default_rng(stream))
        logger.debug(f"Restart {index}: rmse={candidate.rmse:.3e} converged={candidate.converged}")
        candidates.append(candidate)

    finite = [c for c in candidates if math.isfinite(c.rmse)]
    if not finite:
        raise FitError("All fit restarts produced non-finite residuals")
    best_index = min(
        (i for i, c in enumerate(candidates) if math.isfinite(c.rmse)),
        key=lambda i: candidates[i].rmse,
    )
    best = candidates[best_index]

    modeset, merges = project_modes(best.weights, best.widths)
    report = FitReport(
        rmse=rmse(modeset, curve),
        restart_rmse=[c.rmse for c in candidates],
        n_modes=modeset.n,
        seed=cfg.seed,
        converged=any(c.converged for c in finite),
        merged=merges,
        best_restart=best_index,
    )
    logger.info(f"Prony fit: N={modeset.n} rmse={report.rmse:.3e} after {cfg.restarts} restarts")

    if not report.converged:
        raise FitError("Optimizer did not converge in any restart", best=modeset, report=report)
    if cfg.target_rmse is not None and report.rmse > cfg.target_rmse:
        raise FitError(
            f"Best RMSE {report.rmse:.3e} exceeds target {cfg.target_rmse:.3e}",
            best=modeset,
            report=report,
        )
    return modeset, report
