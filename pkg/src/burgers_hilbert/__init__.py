"""Pseudospectral simulator and verification suite for the Burgers-Hilbert
equation ``u_t + u u_x = H[u]`` on the 2pi-periodic torus."""

from .energies import (
    EnergyReport,
    apply_T,
    decomposition_residual,
    modified_energy,
    normal_form,
    standard_energy,
)
from .experiments import (
    PROFILES,
    ScalingStudy,
    StabilityReport,
    SweepEntry,
    SweepResult,
    energy_drift_study,
    fit_power_law,
    lifespan_sweep,
    lin_drift_study,
    stability_study,
)
from .linearized import (
    LinearizedState,
    LinEnergyReport,
    cosimulate,
    linearized_energy,
    linearized_normal_form,
    linearized_rhs,
)
from .records import DiagnosticsRecord
from .solver import (
    BreakdownVerdict,
    EvolutionConfig,
    SolverState,
    detect_breakdown,
    rhs,
    simulate,
    step,
)
from .spectral_core import (
    ConfigurationError,
    GridField,
    SpectrumField,
    abs_derivative,
    commutator_H,
    derivative,
    from_spectrum,
    grid,
    hilbert,
    inner_product,
    l2_norm,
    max_abs,
    mean,
    multiply_dealiased,
    random_band_limited,
    resample,
    sobolev_norm,
    to_spectrum,
    truncate_band,
)

__version__ = "0.1.0"

__all__ = [
    "BreakdownVerdict", "ConfigurationError", "DiagnosticsRecord",
    "EnergyReport", "EvolutionConfig", "GridField", "LinEnergyReport",
    "LinearizedState", "PROFILES", "ScalingStudy", "SolverState",
    "SpectrumField", "StabilityReport", "SweepEntry", "SweepResult",
    "abs_derivative", "apply_T", "commutator_H", "cosimulate",
    "decomposition_residual", "derivative", "detect_breakdown",
    "energy_drift_study", "fit_power_law", "from_spectrum", "grid",
    "hilbert", "inner_product", "l2_norm", "lifespan_sweep",
    "lin_drift_study", "linearized_energy", "linearized_normal_form",
    "linearized_rhs", "max_abs", "mean", "modified_energy",
    "multiply_dealiased", "normal_form", "random_band_limited", "resample",
    "rhs", "simulate", "sobolev_norm", "stability_study", "standard_energy",
    "step", "to_spectrum", "truncate_band",
]
