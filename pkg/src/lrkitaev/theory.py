"""Closed-form predictions for the slow ramp: Landau-Zener probabilities,
threshold momentum, defect-density scaling laws in all pairing regimes,
the two-level adiabaticity parameter, finite-ramp (non-crossing)
corrections, and the scaling variables of the equilibrium Kibble-Zurek
versus dynamical collapse analysis.

Saddle-point prefactors follow the asymptotic evaluation that drops the
1/(2pi) quadrature measure and the integration-range constants, so they are
exposed as unnormalized amplitudes; exponents and functional forms are the
quantitative content.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .model import ChainParams, hopping_fourier, pairing_fourier
from .specfun import gamma_real, riemann_zeta

__all__ = [
    "ScalingPrediction",
    "KZVariables",
    "theta_exponent",
    "lz_probability",
    "threshold_coefficient",
    "threshold_momentum",
    "predicted_defect_density",
    "lz_mapping_parameter",
    "adiabatic_amplitude_infinite_ramp",
    "finite_ramp_excitation",
    "kz_variables",
    "kz_scaling_variable",
    "dyn_scaling_variable",
]


@dataclass(frozen=True)
class ScalingPrediction:
    """Predicted defect-density law n_exc(delta)."""

    theta: float
    prefactor: float
    form: str  # "pure_power" or "power_over_log"
    normalized: bool = False  # saddle-point prefactors drop overall constants


@dataclass(frozen=True)
class KZVariables:
    """Exponents entering the two candidate scaling collapses."""

    phi: float
    z: float
    nu: float
    kz_exponent: float  # nu / (1 + z nu) = 1/(2z)
    z_d: float = 1.0
    nu_d: float = 1.0
    dyn_exponent: float = 0.5


def theta_exponent(beta: float) -> float:
    """Defect scaling exponent: 1/(2 beta - 2) for beta <= 2, else 1/2."""
    if beta <= 1.0:
        raise ValueError("pairing exponent must exceed 1")
    if beta <= 2.0:
        return 1.0 / (2.0 * beta - 2.0)
    return 0.5


def lz_probability(params: ChainParams, delta: float, k: float) -> float:
    """Landau-Zener excitation probability exp(-pi Delta(k)^2 / delta).

    Quantitative for 0 < k < pi/2; a warning is issued outside that range,
    where the mode never crosses and the formula loses meaning.
    """
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    if not 0.0 < k < math.pi / 2.0:
        warnings.warn(f"Landau-Zener formula outside its validity domain (k = {k:g})")
    gap = pairing_fourier(params, k)
    return math.exp(-math.pi * gap * gap / delta)


def threshold_coefficient(beta: float) -> float:
    """Coefficient c in the threshold law k_th = [delta ln2/(pi c)]^theta.

    c = (cos(beta pi/2) Gamma(1-beta)/zeta(beta))^2 for 1 < beta < 2 and
    (zeta(beta-1)/zeta(beta))^2 for beta > 2; the logarithmic regime
    beta = 2 has no pure-power threshold and is rejected.
    """
    if beta <= 1.0:
        raise ValueError("pairing exponent must exceed 1")
    if beta == 2.0:
        raise ValueError("beta = 2 is the logarithmic regime; no power-law threshold")
    if beta == math.inf:
        return 1.0
    if beta < 2.0:
        num = math.cos(beta * math.pi / 2.0) * gamma_real(1.0 - beta)
        return (num / riemann_zeta(beta)) ** 2
    return (riemann_zeta(beta - 1.0) / riemann_zeta(beta)) ** 2


def threshold_momentum(beta: float, delta: float) -> float:
    """Momentum below which population inversion (p_k >= 1/2) occurs."""
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    c = threshold_coefficient(beta)
    k_th = (delta * math.log(2.0) / (math.pi * c)) ** theta_exponent(beta)
    if k_th >= 0.5:
        warnings.warn(
            f"threshold momentum {k_th:.3g} exceeds the low-momentum expansion range"
        )
    return k_th


def predicted_defect_density(beta: float, delta: float) -> tuple[float, ScalingPrediction]:
    """Leading saddle-point defect density and its functional form.

    beta > 2:  n ~ zeta(beta)/zeta(beta-1) sqrt(delta)      (pure power, 1/2)
    beta = 2:  n ~ -(pi^2/6) sqrt(delta)/log(delta/6)       (power over log)
    beta < 2:  n ~ theta Gamma(theta) c^-theta delta^theta  (pure power)
    with c = pi (cos(beta pi/2) Gamma(1-beta)/zeta(beta))^2 in the last case.
    Prefactors are unnormalized (overall quadrature constants dropped).
    """
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    if beta == 2.0:
        pref = math.pi**2 / 6.0
        value = -pref * math.sqrt(delta) / math.log(delta / 6.0)
        return value, ScalingPrediction(0.5, pref, "power_over_log")
    theta = theta_exponent(beta)
    if beta > 2.0:
        pref = (
            1.0
            if beta == math.inf
            else riemann_zeta(beta) / riemann_zeta(beta - 1.0)
        )
        return pref * math.sqrt(delta), ScalingPrediction(0.5, pref, "pure_power")
    c_app = math.pi * threshold_coefficient(beta)
    pref = theta * gamma_real(theta) / c_app**theta
    return pref * delta**theta, ScalingPrediction(theta, pref, "pure_power")


def lz_mapping_parameter(params: ChainParams, delta: float, k: float) -> float:
    """Dimensionless adiabaticity parameter Omega = delta / Delta(k)^2 of the
    rescaled two-level crossing."""
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    gap = pairing_fourier(params, k)
    if gap == 0.0:
        raise ValueError(f"mode k = {k:g} is decoupled (Delta = 0)")
    return delta / (gap * gap)


def adiabatic_amplitude_infinite_ramp(omega: float) -> float:
    """First-order adiabatic-perturbation amplitude (pi/3) exp(-pi/(2 Omega))
    for the full crossing; its square tracks exp(-pi/Omega) up to the
    (pi/3)^2 prefactor."""
    if omega <= 0:
        raise ValueError("adiabaticity parameter must be positive")
    return math.pi / 3.0 * math.exp(-math.pi / (2.0 * omega))


def finite_ramp_excitation(
    params: ChainParams, delta: float, k: float, g_f: float
) -> float:
    """Excitation probability of a ramp stopping at reduced field g_f > 1
    (final chemical potential mu_f = 2 g_f J, above the critical point):

        p_k = delta^2 Delta^2 / (16 (Delta^2 + (j - g_f J)^2)^3).

    First-order adiabatic perturbation theory; the k-integral decays as
    delta^2.
    """
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    if abs(g_f) <= 1.0:
        raise ValueError("|g_f| <= 1 crosses the critical point; no closed form")
    gap = pairing_fourier(params, k)
    if gap == 0.0:
        return 0.0
    detune = hopping_fourier(params, k) - g_f * params.hopping
    denom = (gap * gap + detune * detune) ** 3
    return delta**2 * gap * gap / (16.0 * denom)


def kz_variables(phi: float) -> KZVariables:
    """Exponent bundle for phi = min(alpha, beta); z saturates at 1 once the
    low-momentum dispersion turns linear (phi >= 2)."""
    if phi <= 1.0:
        raise ValueError("phi must exceed 1")
    z = min(phi - 1.0, 1.0)
    return KZVariables(phi=phi, z=z, nu=1.0 / z, kz_exponent=1.0 / (2.0 * z))


def kz_scaling_variable(k: float, delta: float, phi: float) -> float:
    """Equilibrium Kibble-Zurek variable eta = k delta^(-nu/(1+z nu))."""
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    return k * delta ** (-kz_variables(phi).kz_exponent)


def dyn_scaling_variable(k: float, delta: float) -> float:
    """Dynamical scaling variable k / sqrt(delta)."""
    if delta <= 0:
        raise ValueError("ramp rate must be positive")
    return k / math.sqrt(delta)
