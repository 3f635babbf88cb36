"""
Core Module
===========

This module contains the units, grid, wavefunction, configuration and base
classes used throughout the project.
"""

from .errors import *
from .units import Grid, UnitSystem, HBAR_MEV_PS, PLANCK_UEV_PS, UEV_PER_MEV
from .wavefunction import (
    Wavefunction, inner_product, norm_squared, normalize, is_normalized,
    half_line_probability, half_line_overlap, half_line_weights, l2_distance,
)
from .config import RunConfig
from .base import DQDBase

__all__ = [
    'DQDBase', 'RunConfig', 'Grid', 'UnitSystem', 'Wavefunction',
    'HBAR_MEV_PS', 'PLANCK_UEV_PS', 'UEV_PER_MEV',
    'inner_product', 'norm_squared', 'normalize', 'is_normalized',
    'half_line_probability', 'half_line_overlap', 'half_line_weights', 'l2_distance',
]
