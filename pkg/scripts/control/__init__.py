"""
Control Module
==============

Detuning pulses, qubit preparation, amplitude sweeps and rotation tomography.
"""

from .pulses import PulseSpec, epsilon_waveform, waveform, to_schedule, suffix_schedule
from .dynamics import QubitDynamics, GridDynamics, TwoLevelDynamics
from .preparation import PreparationResult, prepare_qubit, grid_distances, localisation_score
from .sweeps import SweepResult, amplitude_sweep, sweep_specs, certify_scan, static_rabi_limit, trapezoid_min_amplitude
from .tomography import (
    TEST_STATES, RotationEstimate, RotationFamily, Certification, estimate_from_amplitudes, tomography,
    tomography_family, decompose_rotation, swing_twist, relabel_minus_psi1, oscillation_amplitude,
    certify_sigma_x, certify_sigma_z, sigma_x_score,
)

__all__ = [
    'PulseSpec', 'epsilon_waveform', 'waveform', 'to_schedule', 'suffix_schedule',
    'QubitDynamics', 'GridDynamics', 'TwoLevelDynamics',
    'PreparationResult', 'prepare_qubit', 'grid_distances', 'localisation_score',
    'SweepResult', 'amplitude_sweep', 'sweep_specs', 'certify_scan', 'static_rabi_limit', 'trapezoid_min_amplitude',
    'TEST_STATES', 'RotationEstimate', 'RotationFamily', 'Certification', 'estimate_from_amplitudes', 'tomography',
    'tomography_family', 'decompose_rotation', 'swing_twist', 'relabel_minus_psi1', 'oscillation_amplitude',
    'certify_sigma_x', 'certify_sigma_z', 'sigma_x_score',
]
