"""
Dynamics Module
===============

Bias schedules, leapfrog kernel executors, the grid propagator and the
two-level reference model.
"""

from .schedule import DetuningSchedule
from .backends import KernelExecutor, SerialExecutor, ThreadedExecutor, available_backends, get_executor
from .propagator import (
    LeapfrogState, Propagator, PropagationResult, step, propagate, max_stable_dt, largest_eigenvalue,
    norm_observer, half_line_observer, projection_observer, standard_observers,
)
from .lsm import (
    TwoLevelHamiltonian, QubitState, LsmTrace, bloch_vector, lsm_eigenvectors, lsm_propagate, lsm_unitary,
    su2_exp, HBAR_UEV_PS,
)

__all__ = [
    'DetuningSchedule', 'KernelExecutor', 'SerialExecutor', 'ThreadedExecutor', 'available_backends', 'get_executor',
    'LeapfrogState', 'Propagator', 'PropagationResult', 'step', 'propagate', 'max_stable_dt', 'largest_eigenvalue',
    'norm_observer', 'half_line_observer', 'projection_observer', 'standard_observers',
    'TwoLevelHamiltonian', 'QubitState', 'LsmTrace', 'bloch_vector', 'lsm_eigenvectors', 'lsm_propagate',
    'lsm_unitary', 'su2_exp', 'HBAR_UEV_PS',
]
