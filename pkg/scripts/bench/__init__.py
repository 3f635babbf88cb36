"""
Bench Module
============

Kernel backend correctness gate and throughput reports.
"""

from .harness import BenchReport, GateResult, correctness_gate, run_bench, reports_frame, state_checksum

__all__ = ['BenchReport', 'GateResult', 'correctness_gate', 'run_bench', 'reports_frame', 'state_checksum']
