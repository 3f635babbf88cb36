"""
DQD Module
==========

Double-dot potential, stationary eigenstates and detuning calibration.
"""

from .potential import (
    DqdParams, BiasSpec, evaluate_dqd, evaluate_bias, total_potential, bias_profile,
    detuning_from_slope, slope_from_detuning,
)
from .stationary import (
    TridiagonalHamiltonian, EigenPair, build_hamiltonian, hamiltonian_from_potential,
    lowest_eigenpairs, solve_dqd, bonding_antibonding, splitting_mev,
)
from .calibration import CalibrationResult, calibrate_lambda
from .system import DqdSystem

__all__ = [
    'DqdParams', 'BiasSpec', 'evaluate_dqd', 'evaluate_bias', 'total_potential', 'bias_profile',
    'detuning_from_slope', 'slope_from_detuning',
    'TridiagonalHamiltonian', 'EigenPair', 'build_hamiltonian', 'hamiltonian_from_potential',
    'lowest_eigenpairs', 'solve_dqd', 'bonding_antibonding', 'splitting_mev',
    'CalibrationResult', 'calibrate_lambda', 'DqdSystem',
]
