"""Equilibrium long-range Kitaev chain in momentum space.

Couplings decay as power laws of the intersite distance with hopping
exponent alpha and pairing exponent beta (both > 1), Kac-normalized so the
thermodynamic-limit Fourier coefficients are polylogarithm ratios.  An
exponent of math.inf selects the nearest-neighbor chain (cos/sin couplings)
through an exact code path.

Conventions (main-text normalization): eps(k, t) = mu/2 - j(k),
omega_k = 2 sqrt(eps^2 + gap^2), j(0) = J, critical point mu_c = 2J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import specfun

__all__ = [
    "ChainParams",
    "CriticalData",
    "ModeEquilibrium",
    "hopping_fourier",
    "pairing_fourier",
    "hopping_profile",
    "pairing_profile",
    "dispersion",
    "spectrum",
    "ground_state_amplitudes",
    "mode_equilibrium",
    "critical_data",
    "winding_number",
    "lowk_hopping_expansion",
    "lowk_pairing_expansion",
]


@dataclass(frozen=True)
class ChainParams:
    """Couplings of the chain at one instant.

    hopping, pairing: energy scales J > 0 and d > 0.
    hopping_exponent, pairing_exponent: power-law decay exponents (> 1),
    math.inf for nearest-neighbor couplings.
    chemical_potential: mu.
    """

    hopping: float = 1.0
    pairing: float = 1.0
    hopping_exponent: float = math.inf
    pairing_exponent: float = math.inf
    chemical_potential: float = 0.0

    def __post_init__(self):
        if not (self.hopping > 0 and self.pairing > 0):
            raise ValueError("hopping and pairing strengths must be positive")
        for name in ("hopping_exponent", "pairing_exponent"):
            g = getattr(self, name)
            if math.isnan(g) or g <= 1.0:
                raise ValueError(f"{name} must exceed 1 (or be math.inf)")
        if not math.isfinite(self.chemical_potential):
            raise ValueError("chemical potential must be finite")

    def with_mu(self, mu: float) -> "ChainParams":
        return replace(self, chemical_potential=mu)


@dataclass(frozen=True)
class CriticalData:
    """Equilibrium critical exponents at mu_c = 2J.

    phi = min(alpha, beta); the spectrum is linear once phi >= 2, so the
    dynamical exponent saturates at z = min(phi - 1, 1) and nu = 1/z,
    keeping z * nu = 1.
    """

    mu_c: float
    phi: float
    z: float
    nu: float


def critical_data(params: ChainParams) -> CriticalData:
    phi = min(params.hopping_exponent, params.pairing_exponent)
    z = min(phi - 1.0, 1.0)
    return CriticalData(mu_c=2.0 * params.hopping, phi=phi, z=z, nu=1.0 / z)


def hopping_profile(params: ChainParams, k) -> np.ndarray:
    """j_alpha(k) = J Re[Li_alpha(e^{ik})]/zeta(alpha) over an array of k."""
    k = np.asarray(k, dtype=float)
    a = params.hopping_exponent
    if a == math.inf:
        return params.hopping * np.cos(k)
    li = specfun.polylog_on_circle_array(a, k)
    return params.hopping * np.real(li) / specfun.riemann_zeta(a)


def pairing_profile(params: ChainParams, k) -> np.ndarray:
    """Delta_beta(k) = d Im[Li_beta(e^{ik})]/zeta(beta) over an array of k."""
    k = np.asarray(k, dtype=float)
    b = params.pairing_exponent
    if b == math.inf:
        return params.pairing * np.sin(k)
    li = specfun.polylog_on_circle_array(b, k)
    return params.pairing * np.imag(li) / specfun.riemann_zeta(b)


def hopping_fourier(params: ChainParams, k: float) -> float:
    """Momentum-space hopping coupling at a single k; even, j(0) = J."""
    return float(hopping_profile(params, k))


def pairing_fourier(params: ChainParams, k: float) -> float:
    """Momentum-space pairing coupling at a single k; odd, Delta(0) = 0."""
    return float(pairing_profile(params, k))


def dispersion(params: ChainParams, k: float) -> float:
    """eps_alpha(k) = mu/2 - j_alpha(k)."""
    return params.chemical_potential / 2.0 - hopping_fourier(params, k)


def spectrum(params: ChainParams, k: float) -> float:
    """Quasiparticle energy omega_k = 2 sqrt(eps^2 + Delta^2) >= 0."""
    eps = dispersion(params, k)
    gap = pairing_fourier(params, k)
    return 2.0 * math.hypot(eps, gap)


def ground_state_amplitudes(params: ChainParams, k: float) -> tuple[float, float]:
    """Bogolyubov ground-state amplitudes (u, v) = (cos th/2, sin th/2).

    The angle th = atan2(Delta, eps) keeps the branch continuous in k on
    (0, pi).  Raises at a gapless mode (eps = Delta = 0), where the rotation
    is undefined; callers decide how to handle that point.
    """
    eps = dispersion(params, k)
    gap = pairing_fourier(params, k)
    if math.hypot(eps, gap) < 1e-14 * max(params.hopping, params.pairing):
        raise ValueError(f"degenerate (gapless) mode at k = {k:g}")
    theta = math.atan2(gap, eps)
    return math.cos(theta / 2.0), math.sin(theta / 2.0)


@dataclass(frozen=True)
class ModeEquilibrium:
    """Equilibrium data of one momentum mode."""

    k: float
    epsilon: float
    gap: float
    omega: float
    theta: float
    u: float
    v: float


def mode_equilibrium(params: ChainParams, k: float) -> ModeEquilibrium:
    eps = dispersion(params, k)
    gap = pairing_fourier(params, k)
    u, v = ground_state_amplitudes(params, k)
    return ModeEquilibrium(
        k=k,
        epsilon=eps,
        gap=gap,
        omega=2.0 * math.hypot(eps, gap),
        theta=math.atan2(gap, eps),
        u=u,
        v=v,
    )


def winding_number(params: ChainParams, grid_size: int = 10000) -> float:
    """Bulk topological invariant w = (1/2pi) oint d theta_k.

    Evaluated as a sum of branch-safe angle increments around the Brillouin
    zone; within 1e-6 of an integer on grids >= 1000 away from |mu| = 2J.
    """
    if grid_size < 1000:
        raise ValueError("winding number needs grid_size >= 1000")
    mu_c = 2.0 * params.hopping
    if abs(abs(params.chemical_potential) - mu_c) < 1e-12 * mu_c:
        raise ValueError("winding number is undefined at |mu| = mu_c (gap closes)")
    ks = np.linspace(-math.pi, math.pi, grid_size + 1)
    eps = params.chemical_potential / 2.0 - hopping_profile(params, ks)
    gap = pairing_profile(params, ks)
    theta = np.arctan2(gap, eps)
    dtheta = np.diff(theta)
    dtheta -= 2.0 * math.pi * np.round(dtheta / (2.0 * math.pi))
    # Orientation chosen so the topological phase (|mu| < mu_c) carries +1.
    return float(-np.sum(dtheta) / (2.0 * math.pi))


_EXPANSION_KMAX = 0.2


def lowk_hopping_expansion(params: ChainParams, k: float) -> float:
    """Truncated low-momentum expansion of j_alpha(k).

    Three regimes: a non-analytic k^(alpha-1) term for alpha < 3, a
    logarithmic k^2 term at alpha = 3, and an analytic k^2 term for
    alpha > 3 (the nearest-neighbor limit truncates cos k).
    """
    if abs(k) > _EXPANSION_KMAX:
        raise ValueError(f"expansion valid only for |k| <= {_EXPANSION_KMAX}")
    j0 = params.hopping
    a = params.hopping_exponent
    ak = abs(k)
    if ak == 0.0:
        return j0
    if a == math.inf:
        return j0 * (1.0 - ak * ak / 2.0)
    za = specfun.riemann_zeta(a)
    if a < 3.0:
        coeff = math.sin(a * math.pi / 2.0) * specfun.gamma_real(1.0 - a) / za
        return j0 * (
            1.0
            + coeff * ak ** (a - 1.0)
            - specfun.riemann_zeta(a - 2.0) / (2.0 * za) * ak * ak
        )
    if a == 3.0:
        return j0 * (1.0 + (2.0 * math.log(ak) - 3.0) / (4.0 * za) * ak * ak)
    return j0 * (1.0 - specfun.riemann_zeta(a - 2.0) / (2.0 * za) * ak * ak)


def lowk_pairing_expansion(params: ChainParams, k: float) -> float:
    """Truncated low-momentum expansion of Delta_beta(k); odd in k.

    Regimes: k^(beta-1) plus linear for beta < 2, the logarithmic
    6(1 - log k)/pi^2 * k form at beta = 2, and a plain linear term for
    beta > 2.
    """
    if abs(k) > _EXPANSION_KMAX:
        raise ValueError(f"expansion valid only for |k| <= {_EXPANSION_KMAX}")
    if k == 0.0:
        return 0.0
    d0 = params.pairing
    b = params.pairing_exponent
    sign = 1.0 if k > 0 else -1.0
    ak = abs(k)
    if b == math.inf:
        return sign * d0 * ak
    zb = specfun.riemann_zeta(b)
    if b < 2.0:
        coeff = math.cos(b * math.pi / 2.0) * specfun.gamma_real(1.0 - b) / zb
        return sign * d0 * (
            coeff * ak ** (b - 1.0) + specfun.riemann_zeta(b - 1.0) / zb * ak
        )
    if b == 2.0:
        return sign * d0 * 6.0 * (1.0 - math.log(ak)) / (math.pi**2) * ak
    linear = specfun.riemann_zeta(b - 1.0) / zb * ak
    if b < 3.0:
        # The non-analytic k^(beta-1) branch term is still subleading but
        # numerically comparable below beta = 3; keep it.
        coeff = math.cos(b * math.pi / 2.0) * specfun.gamma_real(1.0 - b) / zb
        linear += coeff * ak ** (b - 1.0)
    return sign * d0 * linear
