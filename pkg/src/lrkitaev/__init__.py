"""Slow-quench simulator and analysis toolkit for the long-range Kitaev chain."""

from .analysis import CollapseReport, ScalingFit, collapse_spread, fit_power_law, fit_power_over_log
from .dynamics import (
    GridSpec,
    ModeState,
    QuenchResult,
    RampProtocol,
    evolve_mode,
    excitation_probability,
    momentum_grid,
    run_quench,
)
from .model import (
    ChainParams,
    CriticalData,
    ModeEquilibrium,
    critical_data,
    dispersion,
    ground_state_amplitudes,
    hopping_fourier,
    lowk_hopping_expansion,
    lowk_pairing_expansion,
    mode_equilibrium,
    pairing_fourier,
    spectrum,
    winding_number,
)
from .theory import (
    KZVariables,
    ScalingPrediction,
    adiabatic_amplitude_infinite_ramp,
    dyn_scaling_variable,
    finite_ramp_excitation,
    kz_scaling_variable,
    kz_variables,
    lz_mapping_parameter,
    lz_probability,
    predicted_defect_density,
    theta_exponent,
    threshold_coefficient,
    threshold_momentum,
)

__version__ = "0.1.0"
