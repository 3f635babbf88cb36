"""
DQD Charge-Qubit Simulator Scripts Package
==========================================

This package contains all the scripts for the double-quantum-dot charge-qubit
simulator, organized into the following modules:

- core: Base classes, configuration, units, wavefunctions and file helpers
- dqd: Double-dot potential, stationary states and λ calibration
- dynamics: Leapfrog propagator, kernel backends and the two-level model
- qubit: Optimal qubit basis and readout
- control: Pulses, state preparation, sweeps and rotation tomography
- bench: Kernel backend benchmarks
- reporting: Plot scripts, workbooks and dashboards
- automation: Experiment pipeline behind the command-line verbs
"""

__version__ = '0.1.0'
