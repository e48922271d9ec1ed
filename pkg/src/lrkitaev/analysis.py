"""Statistical post-processing of quench sweeps: power-law exponent fits,
the logarithmically corrected fit at the beta = 2 border, and scaling
collapse quality metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import curve_fit

__all__ = ["ScalingFit", "CollapseReport", "fit_power_law", "fit_power_over_log", "collapse_spread"]

_MIN_POINTS = 5
_MIN_DECADES = 1.5


@dataclass(frozen=True)
class ScalingFit:
    """Fitted defect-scaling law over a window of ramp rates."""

    theta_hat: float
    stderr: float
    r_squared: float
    window: tuple[float, float]
    model: str  # "pure_power" or "power_over_log"
    amplitude: float = math.nan
    log_scale: float = math.nan  # B in n = A sqrt(delta)/|log(delta/B)|


def _validated(points):
    pts = sorted((float(d), float(n)) for d, n in points)
    if len(pts) < _MIN_POINTS:
        raise ValueError(f"need at least {_MIN_POINTS} (delta, n_exc) points")
    if any(d <= 0 or n <= 0 for d, n in pts):
        raise ValueError("ramp rates and defect densities must be positive")
    span = math.log10(pts[-1][0] / pts[0][0])
    if span < _MIN_DECADES:
        raise ValueError(
            f"delta window spans {span:.2f} decades; need >= {_MIN_DECADES}"
        )
    return np.array([d for d, _ in pts]), np.array([n for _, n in pts])


def fit_power_law(points) -> ScalingFit:
    """Ordinary least squares on (log delta, log n): theta_hat is the slope.

    Scale-equivariant: rescaling n or delta by constants shifts only the
    intercept.
    """
    delta, n = _validated(points)
    x, y = np.log(delta), np.log(n)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = len(x) - 2
    sxx = float(np.sum((x - x.mean()) ** 2))
    stderr = math.sqrt(float(np.sum(resid**2)) / dof / sxx) if dof > 0 else 0.0
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(
        theta_hat=float(slope),
        stderr=stderr,
        r_squared=max(0.0, min(1.0, r2)),
        window=(float(delta[0]), float(delta[-1])),
        model="pure_power",
        amplitude=math.exp(intercept),
    )


def fit_power_over_log(points) -> ScalingFit:
    """Nonlinear fit of the beta = 2 border law n = A sqrt(delta)/|log(delta/B)|.

    Fitted in log space; theta_hat is fixed at 1/2 by the model, stderr
    reports the propagated uncertainty of A (relative), and r_squared is the
    log-space fit quality, comparable with fit_power_law residuals.
    """
    delta, n = _validated(points)
    x, y = np.log(delta), np.log(n)

    def log_model(logd, log_a, log_b):
        return log_a + 0.5 * logd - np.log(np.abs(logd - log_b))

    # B must stay above the window so log(delta/B) keeps one sign.
    lb = math.log(delta[-1]) + 0.5
    popt, pcov = curve_fit(
        log_model,
        x,
        y,
        p0=(float(y[-1] - 0.5 * x[-1] + math.log(abs(x[-1] - math.log(6.0)))), math.log(6.0)),
        bounds=([-50.0, lb], [50.0, 50.0]),
        maxfev=20000,
    )
    resid = y - log_model(x, *popt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    a_err = math.sqrt(max(0.0, pcov[0, 0]))
    return ScalingFit(
        theta_hat=0.5,
        stderr=a_err,
        r_squared=max(0.0, min(1.0, r2)),
        window=(float(delta[0]), float(delta[-1])),
        model="power_over_log",
        amplitude=math.exp(popt[0]),
        log_scale=math.exp(popt[1]),
    )


@dataclass(frozen=True)
class CollapseReport:
    """Collapse quality of a family of excitation-probability curves."""

    scaling_exponent_used: float
    spread: float
    samples_per_curve: tuple[int, ...]


def collapse_spread(curves, exponent: float, grid_points: int = 256) -> CollapseReport:
    """Maximum vertical distance between curves rescaled by x = k delta^-exponent.

    curves: iterable of (delta, k_samples, p_samples).  Each curve is
    interpolated (monotone piecewise-cubic) onto a common log-spaced grid
    over the overlap of the rescaled abscissas; spread is the maximum over
    the grid of (max - min) across curves.
    """
    prepared = []
    counts = []
    deltas = set()
    for delta, k_s, p_s in curves:
        delta = float(delta)
        deltas.add(delta)
        k_s = np.asarray(k_s, dtype=float)
        p_s = np.asarray(p_s, dtype=float)
        in_transition = int(np.sum((p_s >= 0.05) & (p_s <= 0.95)))
        if in_transition < 50:
            raise ValueError(
                f"curve at delta = {delta:g} has only {in_transition} samples "
                "with p in [0.05, 0.95]; need >= 50"
            )
        counts.append(in_transition)
        x = k_s * delta ** (-float(exponent))
        order = np.argsort(x)
        prepared.append((x[order], p_s[order]))
    if len(prepared) < 3 or len(deltas) < 3:
        raise ValueError("need at least 3 curves at distinct ramp rates")

    lo = max(x[0] for x, _ in prepared)
    hi = min(x[-1] for x, _ in prepared)
    if not lo < hi:
        raise ValueError("rescaled curves have empty overlap region")
    grid = np.geomspace(lo, hi, grid_points) if lo > 0 else np.linspace(lo, hi, grid_points)
    stacked = np.vstack([PchipInterpolator(x, p)(grid) for x, p in prepared])
    spread = float(np.max(stacked.max(axis=0) - stacked.min(axis=0)))
    return CollapseReport(
        scaling_exponent_used=float(exponent),
        spread=spread,
        samples_per_curve=tuple(counts),
    )
