"""
Tomography of spin-j states from displaced-projector probabilities on the sphere.

Typical use::

    from su2tomo import build_grid, make_coherent, exact_probability_grid, reconstruct_density
    from su2tomo import SpherePoint

    rho = make_coherent(1, SpherePoint(0.4, 1.1))
    grid = build_grid(1)
    estimate = reconstruct_density(exact_probability_grid(rho, grid))
"""

from .errors import (ConfigError, DomainError, FormatError, GridTooCoarseError,
                     InconsistentCoefficientsError, JCInversionError, NumericalError,
                     ProtocolError, StationaryPointError, SU2TomoError,
                     UnsupportedConfigurationError, VanishingDenominatorError)
from .halfint import HalfInteger, half, mu_values
from .su2 import (SpherePoint, canonical_angles, clebsch_gordan, euler_rotation, legendre_p,
                  lm_index, rotation_operator, spherical_harmonic, spin_matrices, tensor_operator,
                  tensor_operators, wigner_d)
from .states import (DensityMatrix, StateVector, as_density, coherent_amplitudes, make_coherent,
                     make_dicke, make_mixture, make_superposition, random_mixed, random_pure)
from .measure import (MeasurementRecord, ProbabilityGrid, SphereGrid, build_grid, displace,
                      displaced_probabilities, displaced_projector, exact_probability_grid,
                      probabilities_on_grid, record_to_probability_grid, sample_from_probabilities,
                      sample_measurements)
from .reconstruct import (MultipoleCoefficients, QPDGrid, check_readout, coherent_frame_operator,
                          density_from_multipoles, fidelity, glauber_p_check, max_abs_diff,
                          multipoles_from_density, multipoles_from_probabilities,
                          project_to_physical, q_function, qpd_from_multipoles,
                          qpd_from_probabilities, qpd_kernel, readout_denominators,
                          reconstruct_density, trace_distance)
from .fock import fock_to_su2, su2_to_fock
from .frontends import (InterferometerParams, IonParams, LambDickeWarning, RamseyParams,
                        displacement_dagger, interferometer_displacement,
                        interferometer_settings, interferometer_transform, ion_displacement,
                        ion_settings, ion_transform, phase_equivalence_error,
                        ramsey_displacement, ramsey_settings, ramsey_transform)
from .twomode import BlockResult, TwoModeState, blockwise_reconstruct, decompose_two_mode, sample_two_mode
from .jc import JCInversion, JCReadoutParams, jc_invert, jc_signal, sample_jc_signal
from .metrology import phase_uncertainty

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DomainError", "FormatError", "GridTooCoarseError",
    "InconsistentCoefficientsError", "JCInversionError", "NumericalError", "ProtocolError",
    "StationaryPointError", "SU2TomoError", "UnsupportedConfigurationError",
    "VanishingDenominatorError", "HalfInteger", "half", "mu_values", "SpherePoint",
    "canonical_angles", "clebsch_gordan", "euler_rotation", "legendre_p", "lm_index",
    "rotation_operator", "spherical_harmonic", "spin_matrices", "tensor_operator",
    "tensor_operators", "wigner_d", "DensityMatrix", "StateVector", "as_density",
    "coherent_amplitudes", "make_coherent", "make_dicke", "make_mixture", "make_superposition",
    "random_mixed", "random_pure", "MeasurementRecord", "ProbabilityGrid", "SphereGrid",
    "build_grid", "displace", "displaced_probabilities", "displaced_projector",
    "exact_probability_grid", "probabilities_on_grid", "record_to_probability_grid",
    "sample_from_probabilities", "sample_measurements", "MultipoleCoefficients", "QPDGrid",
    "check_readout", "coherent_frame_operator", "density_from_multipoles", "fidelity",
    "glauber_p_check", "max_abs_diff", "multipoles_from_density",
    "multipoles_from_probabilities", "project_to_physical", "q_function", "qpd_from_multipoles",
    "qpd_from_probabilities", "qpd_kernel", "readout_denominators", "reconstruct_density",
    "trace_distance", "fock_to_su2", "su2_to_fock", "InterferometerParams", "IonParams",
    "LambDickeWarning", "RamseyParams", "displacement_dagger", "interferometer_displacement",
    "interferometer_settings", "interferometer_transform", "ion_displacement", "ion_settings",
    "ion_transform", "phase_equivalence_error", "ramsey_displacement", "ramsey_settings",
    "ramsey_transform", "BlockResult", "TwoModeState", "blockwise_reconstruct",
    "decompose_two_mode", "sample_two_mode", "JCInversion", "JCReadoutParams", "jc_invert",
    "jc_signal", "sample_jc_signal", "phase_uncertainty",
]
