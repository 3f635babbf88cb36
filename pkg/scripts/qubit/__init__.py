"""
Qubit Module
============

Optimal charge-qubit basis and readout.
"""

from .basis import (
    LocalizedPair, QubitBasis, OperatingRange, DMap, localized_pair, correlation_d, d_map,
    operating_range, build_qubit_basis, basis_fidelities, verify_sign_convention,
    localisation_curves, readout_coefficients, distance_s,
)

__all__ = [
    'LocalizedPair', 'QubitBasis', 'OperatingRange', 'DMap', 'localized_pair', 'correlation_d', 'd_map',
    'operating_range', 'build_qubit_basis', 'basis_fidelities', 'verify_sign_convention',
    'localisation_curves', 'readout_coefficients', 'distance_s',
]
