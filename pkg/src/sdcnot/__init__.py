"""Selective-darkening CNOT gate toolkit for coupled fluxonium qubits.

Static spectra and charge matrix elements, interaction-induced effective
rates, driven unitary dynamics with a four-term error budget, dissipative
gate error through process tomography, and three-parameter pulse
calibration.
"""

__version__ = "0.1.0"

from .coupled import CoupledSystem, assemble, matrix_element, zz_rate
from .dynamics import (
    CNOT,
    GateReport,
    PulseSpec,
    VirtualZPhases,
    apply_virtual_z,
    coherent_fidelity,
    envelope,
    error_budget,
    project_computational,
    propagate,
    simulate_gate,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegeneracyError,
    LabelLookupError,
    LabelingError,
    ParameterError,
    PhaseExtractionError,
    SdcnotError,
    TruncationError,
)
from .fluxonium import (
    FluxoniumSpec,
    QubitSpectrum,
    build_hamiltonian,
    charge_operator,
    diagonalize,
)
from .lindblad import (
    ChiMatrix,
    DissipationSpec,
    average_gate_fidelity,
    chi_cnot_ideal,
    collapse_operators,
    gate_error,
    process_fidelity,
    process_tomography,
    propagate_master,
)
from .optimizer import (
    OptimizationResult,
    envelope_area_rescale,
    initial_guess,
    optimize,
    sweep_gate_duration,
)
from .perturbation import (
    PerturbativeElements,
    cross_elements_perturbative,
    hybridization_contributions,
)
from .rates import (
    EffectiveRates,
    effective_hamiltonian_rates,
    eta_sd,
    lambda_12,
    lambda_drive,
    pi_pulse_duration,
    rabi_rate_linear,
    rabi_rate_sd,
    rabi_rate_swapped,
    speed_limit,
)

__all__ = [
    "CNOT",
    "ChiMatrix",
    "ConfigError",
    "ConvergenceError",
    "CoupledSystem",
    "DegeneracyError",
    "DissipationSpec",
    "EffectiveRates",
    "FluxoniumSpec",
    "GateReport",
    "LabelLookupError",
    "LabelingError",
    "OptimizationResult",
    "ParameterError",
    "PerturbativeElements",
    "PhaseExtractionError",
    "PulseSpec",
    "QubitSpectrum",
    "SdcnotError",
    "TruncationError",
    "VirtualZPhases",
    "apply_virtual_z",
    "assemble",
    "average_gate_fidelity",
    "build_hamiltonian",
    "charge_operator",
    "chi_cnot_ideal",
    "coherent_fidelity",
    "collapse_operators",
    "cross_elements_perturbative",
    "diagonalize",
    "effective_hamiltonian_rates",
    "envelope",
    "envelope_area_rescale",
    "error_budget",
    "eta_sd",
    "gate_error",
    "hybridization_contributions",
    "initial_guess",
    "lambda_12",
    "lambda_drive",
    "matrix_element",
    "optimize",
    "pi_pulse_duration",
    "process_fidelity",
    "process_tomography",
    "project_computational",
    "propagate",
    "propagate_master",
    "rabi_rate_linear",
    "rabi_rate_sd",
    "rabi_rate_swapped",
    "simulate_gate",
    "speed_limit",
    "sweep_gate_duration",
    "zz_rate",
]
