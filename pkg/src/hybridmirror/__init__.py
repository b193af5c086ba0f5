"""Hybrid photon-mirror interferometer toolkit.

A single photon in a two-arm interferometer drives a harmonically bound
mirror through radiation pressure in one arm.  The package derives the
coupling constants from laboratory inputs, integrates the coupled
photon-mirror equations of motion, averages the which-path coherence over
thermal mirror ensembles (closed form, Gauss-Hermite quadrature, and
Monte Carlo), and maps the surviving coherence to detector probabilities.
"""

from .analytic import (
    CoherenceSample,
    MirrorPhasePoint,
    OscillationParams,
    accumulated_phase,
    interaction_phase,
    mirror_trajectory,
    oscillation_from_ic,
    photon_arm_a,
    photon_arm_b,
    rho_ab_pointlike,
    theta,
)
from .decoherence import (
    AveragedCoherence,
    MirrorModel,
    ShortTimeReport,
    ThermalEnsemble,
    averaged_rho_closed,
    averaged_rho_monte_carlo,
    averaged_rho_quadrature,
    boltzmann_density,
    eta_ratio,
    gaussian_short_time_check,
    phase_kappa2_theta,
    visibility,
)
from .detection import (
    AveragedDensityMatrix,
    DetectorProbabilities,
    averaged_density_matrix,
    detection_probabilities,
    detector_projectors,
)
from .dynamics import (
    HybridState,
    StateDerivative,
    StepControl,
    Trajectory,
    conserved_quantities,
    eom_rhs,
    hybrid_energy,
    integrate,
)
from .errors import (
    ConfigurationError,
    ConsistencyError,
    HybridMirrorError,
    IntegrationError,
    ParameterError,
)
from .params import (
    HBAR,
    KB,
    DerivedParams,
    DimensionlessParams,
    PhysicalParams,
    bose_occupation,
    decoherence_times,
    derive,
    derive_dimensionless,
    dimensionless_from_physical,
    high_temperature_expansion,
    physical_from_dimensionless,
    x_th_from_temperature,
    z_ratio_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR",
    "KB",
    "AveragedCoherence",
    "AveragedDensityMatrix",
    "CoherenceSample",
    "ConfigurationError",
    "ConsistencyError",
    "DerivedParams",
    "DetectorProbabilities",
    "DimensionlessParams",
    "HybridMirrorError",
    "HybridState",
    "IntegrationError",
    "MirrorModel",
    "MirrorPhasePoint",
    "OscillationParams",
    "ParameterError",
    "PhysicalParams",
    "ShortTimeReport",
    "StateDerivative",
    "StepControl",
    "ThermalEnsemble",
    "Trajectory",
    "accumulated_phase",
    "averaged_density_matrix",
    "averaged_rho_closed",
    "averaged_rho_monte_carlo",
    "averaged_rho_quadrature",
    "boltzmann_density",
    "bose_occupation",
    "conserved_quantities",
    "decoherence_times",
    "derive",
    "derive_dimensionless",
    "detection_probabilities",
    "detector_projectors",
    "dimensionless_from_physical",
    "eom_rhs",
    "eta_ratio",
    "gaussian_short_time_check",
    "high_temperature_expansion",
    "hybrid_energy",
    "integrate",
    "interaction_phase",
    "mirror_trajectory",
    "oscillation_from_ic",
    "phase_kappa2_theta",
    "photon_arm_a",
    "photon_arm_b",
    "physical_from_dimensionless",
    "rho_ab_pointlike",
    "theta",
    "visibility",
    "x_th_from_temperature",
    "z_ratio_deviation",
]
