"""Special-function kernels: polylogarithm on the unit circle, Riemann zeta
with analytic continuation, the real Gamma function, and the lower real
branch of the Lambert W function.

All functions are pure and thread-safe.  Accuracy targets: ~1e-12 relative
for zeta and Gamma, ~1e-10 for the polylogarithm (degrading gracefully when
the order sits within ~1e-4 of an integer, where the continuation formula
suffers Gamma/zeta pole cancellation).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import lambertw as _scipy_lambertw

__all__ = [
    "riemann_zeta",
    "polylog_on_circle",
    "polylog_on_circle_array",
    "gamma_real",
    "lambert_w_lower",
]

# Bernoulli numbers B_2 .. B_28 for the Euler-Maclaurin tail.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
)

_EM_CUTOFF = 0.5  # below this, switch to the reflection formula


def _zeta_euler_maclaurin(s: float, n_terms: int = 25) -> float:
    """zeta(s) by Euler-Maclaurin summation; reliable for s >= 0.5, s != 1."""
    if s > 60.0:
        # The direct series already converges to machine precision.
        return sum(k ** (-s) for k in range(1, 40))
    n = n_terms
    acc = sum(k ** (-s) for k in range(1, n))
    acc += n ** (1.0 - s) / (s - 1.0)
    acc += 0.5 * n ** (-s)
    # Tail: sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * n^{-s-2j+1}
    poch = s  # rising factorial s(s+1)...(s+2j-2), start with j=1 term
    fact = 2.0
    power = n ** (-s - 1.0)
    for j, b in enumerate(_BERNOULLI, start=1):
        term = b / fact * poch * power
        acc += term
        if abs(term) < 1e-18 * abs(acc):
            break
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
        power /= n * n
    return acc


def riemann_zeta(s: float) -> float:
    """Riemann zeta at real s != 1, with continuation to negative arguments.

    Negative and small arguments go through the functional equation
    zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s), keeping a single
    evaluation path that the reflection-identity tests can exercise.
    """
    s = float(s)
    if not math.isfinite(s):
        if s == math.inf:
            return 1.0
        raise ValueError("zeta requires a finite argument")
    if s == 1.0:
        raise ValueError("zeta has a pole at s = 1")
    if s >= _EM_CUTOFF:
        return _zeta_euler_maclaurin(s)
    if s == 0.0:
        return -0.5
    # Trivial zeros at negative even integers: sin(pi s / 2) vanishes.
    if s < 0 and s == 2.0 * round(s / 2.0):
        return 0.0
    return (
        2.0**s
        * math.pi ** (s - 1.0)
        * math.sin(math.pi * s / 2.0)
        * math.gamma(1.0 - s)
        * _zeta_euler_maclaurin(1.0 - s)
    )


def gamma_real(x: float) -> float:
    """Gamma(x) for real x away from the poles at 0, -1, -2, ..."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("gamma requires a finite argument")
    if x <= 0.0 and x == round(x):
        raise ValueError(f"gamma has a pole at x = {x:g}")
    return math.gamma(x)


def lambert_w_lower(s: float) -> float:
    """Lower real branch W_{-1}(s) on [-1/e, 0)."""
    s = float(s)
    branch_point = -1.0 / math.e
    if not (branch_point <= s < 0.0):
        raise ValueError("W_{-1} is real only on [-1/e, 0)")
    if s == branch_point:
        return -1.0
    w = _scipy_lambertw(s, k=-1)
    if abs(w.imag) > 1e-12 or not math.isfinite(w.real):
        raise ValueError(f"W_{{-1}}({s:g}) left the real branch")
    return float(w.real)


_SERIES_TERMS = 72  # geometric ratio <= (pi/2pi)^2 = 1/4 on |k| <= pi


@lru_cache(maxsize=256)
def _polylog_coeffs(s: float) -> tuple[tuple[float, ...], int, float]:
    """Coefficients zeta(s - j)/j! of the expansion of Li_s(e^mu) about mu=0.

    Returns (coeffs, j_log, harmonic) where j_log >= 0 marks the index of the
    logarithmic term (integer s only, j_log = s - 1; -1 otherwise) and
    harmonic = H_{s-1} for integer s.
    """
    is_int = s == round(s) and s < 1e15
    j_log = int(round(s)) - 1 if is_int else -1
    coeffs = []
    fact = 1.0
    for j in range(_SERIES_TERMS):
        if j > 0:
            fact *= j
        if j == j_log:
            coeffs.append(0.0)
        else:
            coeffs.append(riemann_zeta(s - j) / fact)
    harmonic = sum(1.0 / i for i in range(1, j_log + 1)) if is_int else 0.0
    return tuple(coeffs), j_log, harmonic


def _polylog_positive(s: float, k: np.ndarray) -> np.ndarray:
    """Li_s(e^{ik}) for an array of k in (0, pi].  Series about k = 0."""
    mu = 1j * k  # shape (n,)
    coeffs, j_log, harmonic = _polylog_coeffs(s)
    powers = np.ones((k.size, _SERIES_TERMS), dtype=complex)
    for j in range(1, _SERIES_TERMS):
        powers[:, j] = powers[:, j - 1] * mu
    acc = powers @ np.asarray(coeffs, dtype=complex)
    if j_log >= 0:
        # log(-mu) = log k - i pi/2 for k > 0
        log_term = np.log(k) - 0.5j * math.pi
        fact = math.factorial(j_log)
        acc += powers[:, j_log] / fact * (harmonic - log_term)
    else:
        # Branch term Gamma(1-s) (-mu)^{s-1}; (-ik)^{s-1} = k^{s-1} e^{-i pi (s-1)/2}
        acc += (
            math.gamma(1.0 - s)
            * k ** (s - 1.0)
            * np.exp(-0.5j * math.pi * (s - 1.0))
        )
    return acc


def polylog_on_circle_array(s: float, k: np.ndarray) -> np.ndarray:
    """Vectorized Li_s(e^{ik}) for real order s > 1 and momenta k.

    Momenta are wrapped into [-pi, pi); conjugate symmetry is applied for
    negative arguments so Li_s(e^{-ik}) = conj(Li_s(e^{ik})) holds exactly.
    """
    s = float(s)
    if not math.isfinite(s) or s <= 1.0:
        raise ValueError("polylog on the unit circle requires finite s > 1")
    k = np.asarray(k, dtype=float)
    if not np.all(np.isfinite(k)):
        raise ValueError("polylog requires finite momenta")
    k_wrapped = np.mod(k + math.pi, 2.0 * math.pi) - math.pi
    out = np.empty(k_wrapped.shape, dtype=complex)
    flat_k = np.atleast_1d(k_wrapped).ravel()
    flat_out = np.empty(flat_k.shape, dtype=complex)
    zero = flat_k == 0.0
    if np.any(zero):
        flat_out[zero] = riemann_zeta(s)
    pos = flat_k > 0.0
    if np.any(pos):
        flat_out[pos] = _polylog_positive(s, flat_k[pos])
    neg = flat_k < 0.0
    if np.any(neg):
        flat_out[neg] = np.conj(_polylog_positive(s, -flat_k[neg]))
    out = flat_out.reshape(k_wrapped.shape) if k_wrapped.shape else flat_out[0]
    return out


def polylog_on_circle(s: float, k: float) -> complex:
    """Li_s(e^{ik}) for real order s > 1 and a single momentum k."""
    if not math.isfinite(k):
        raise ValueError("polylog requires a finite momentum")
    return complex(polylog_on_circle_array(s, np.asarray(float(k))))
